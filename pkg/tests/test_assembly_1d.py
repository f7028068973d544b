import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from fitted_hjb import benchmarks as bm
from fitted_hjb.errors import DomainError, NumericFailure
from fitted_hjb.assembly_1d import FittedVolume1D, assemble_1d, fitted_flux_degenerate, fitted_flux_interior, fitted_weights
from fitted_hjb.grid import Grid1D, make_uniform_grid_1d
from helpers import power_form_flux, spec_1d


def test_constant_field_flux():
    assert fitted_flux_interior(0.7, -0.3, 1.0, 1.5, 2.0, 2.0) == pytest.approx(-0.6, rel=1e-14)


def test_flux_worked_example():
    assert fitted_flux_interior(0.5, 1.0, 1.0, 2.0, 1.0, 4.0) == pytest.approx(5.0, rel=1e-14)


def test_flux_small_b_uses_log_limit():
    assert fitted_flux_interior(1.0, 1e-14, 1.0, np.e, 0.0, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_small_b_limit_matches_power_form():
    lim = fitted_flux_interior(1.0, 1e-14, 1.0, np.e, 0.0, 1.0)
    direct = power_form_flux(1.0, 1e-6, 1.0, np.e, 0.0, 1.0)
    assert abs(lim - direct) <= 1e-6 * abs(direct)


def test_degenerate_flux_examples():
    assert fitted_flux_degenerate(1.0, 0.5, 2.0, 4.0) == pytest.approx(2.5)
    assert fitted_flux_degenerate(0.3, -0.2, 1.7, 1.7) == pytest.approx(-0.2 * 1.7)
    assert fitted_flux_degenerate(0.4, 0.4, 123.0, 2.0) == pytest.approx(0.8)


@pytest.mark.parametrize("args", [(1.0, 1.0, 0.0, 1.0), (1.0, 1.0, 2.0, 1.0), (0.0, 1.0, 1.0, 2.0), (np.nan, 1.0, 1.0, 2.0)])
def test_weights_domain(args):
    with pytest.raises(DomainError):
        fitted_weights(*args)


def test_huge_beta_stays_finite():
    # exp(beta ln 2) overflows for beta ~ 1e4; the weights tend to upwind values
    lo, hi = fitted_weights(1e-4, 1.0, 1.0, 2.0)
    assert np.isfinite(lo) and np.isfinite(hi)
    assert lo == pytest.approx(0.0, abs=1e-300) and hi == pytest.approx(1.0)
    lo, hi = fitted_weights(1e-4, -1.0, 1.0, 2.0)
    assert lo == pytest.approx(1.0) and hi == pytest.approx(0.0, abs=1e-300)


@given(st.floats(0.01, 5), st.floats(1e-3, 5), st.booleans(), st.floats(0.01, 5), st.floats(1.01, 3),
       st.floats(-3, 3), st.floats(-3, 3))
def test_flux_reproduces_local_solution(a, b, negative, xl, ratio, C1, C2):
    b = -b if negative else b
    beta = b / a
    assume(abs(beta) <= 40)
    v = lambda x: C1 / b + C2 * x ** (-beta)  # noqa: E731
    xr = xl * ratio
    vl, vr = v(xl), v(xr)
    # size of the two terms that cancel inside the flux
    scale = abs(C1) + (a / np.log(ratio) + abs(b)) * (abs(vl) + abs(vr))
    assert abs(fitted_flux_interior(a, b, xl, xr, vl, vr) - C1) <= 1e-12 * scale


def test_hand_assembly_two_unknowns():
    grid = Grid1D(np.array([0.0, 1.0, 2.0, 3.0]))
    v0, v3 = 2.0, 5.0
    spec = spec_1d(a=1.0, b=0.0, c=-1.0, boundary=lambda t, x: np.where(x == 0, v0, v3))
    sys_ = assemble_1d(spec, grid, np.zeros((2, 1)), 0.0)
    ln2, ln15 = np.log(2.0), np.log(1.5)
    expected = np.array([
        [(1.5 / ln2 + 0.5 * 0.5) / 1.0 + 1.0, -1.5 / ln2],
        [-1.5 / ln2, (2.5 / ln15 + 1.5 / ln2) + 1.0],
    ])
    np.testing.assert_allclose(sys_.E.toarray(), expected, rtol=1e-14)
    np.testing.assert_allclose(sys_.F, [-0.25 * v0, -2.5 / ln15 * v3], rtol=1e-14)
    np.testing.assert_allclose(sys_.A.toarray(), -expected, rtol=1e-14)
    from fitted_hjb.sparse_linalg import check_m_matrix
    assert check_m_matrix(sys_.E).verdict


def test_entries_match_power_form():
    a, b, c = 0.3, 0.2, -0.1
    grid = make_uniform_grid_1d(2.0, 8)
    E = assemble_1d(spec_1d(a, b, c), grid, np.zeros((7, 1)), 0.0).E.toarray()
    x, f, l = grid.nodes, grid.faces, grid.cell_lengths
    for i in range(2, 7):
        beta = b / a
        east = -f[i + 1] * b * x[i + 1] ** beta / (l[i] * (x[i + 1] ** beta - x[i] ** beta))
        west = -f[i] * b * x[i - 1] ** beta / (l[i] * (x[i] ** beta - x[i - 1] ** beta))
        centre = (f[i + 1] * b * x[i] ** beta / (x[i + 1] ** beta - x[i] ** beta)
                  + f[i] * b * x[i] ** beta / (x[i] ** beta - x[i - 1] ** beta)) / l[i] - c
        np.testing.assert_allclose([E[i - 1, i - 2], E[i - 1, i - 1]], [west, centre], rtol=1e-12)
        if i < 7:
            np.testing.assert_allclose(E[i - 1, i] if i < 7 else 0, east if i < 7 else 0, rtol=1e-12)


def test_first_row_quarter_factor():
    a, b, c = 0.3, 0.2, -0.1
    grid = make_uniform_grid_1d(1.0, 10)
    sys_ = assemble_1d(spec_1d(a, b, c, boundary=1.0), grid, np.zeros((9, 1)), 0.0)
    x, l = grid.nodes, grid.cell_lengths
    beta = b / a
    east = grid.faces[2] * b * x[1] ** beta / (l[1] * (x[2] ** beta - x[1] ** beta))
    assert sys_.E[0, 0] == pytest.approx(east + x[1] * (a + b) / (4 * l[1]) - c, rel=1e-12)
    assert sys_.F[0] == pytest.approx(-x[1] * (a - b) / (4 * l[1]), rel=1e-12)


def test_zero_boundary_gives_zero_F():
    sys_ = assemble_1d(spec_1d(0.5, 0.3, -0.2), make_uniform_grid_1d(1.0, 6), np.zeros((5, 1)), 0.0)
    assert np.all(sys_.F == 0)


def test_tridiagonal_pattern():
    E = assemble_1d(spec_1d(0.5, 0.3, -0.2), make_uniform_grid_1d(1.0, 9), np.zeros((8, 1)), 0.0).E
    coo = E.tocoo()
    assert np.max(np.abs(coo.row - coo.col)) == 1


def test_non_finite_coefficient_reported():
    spec = spec_1d(a=lambda x, t, al: np.where(x > 0.5, np.nan, 1.0))
    with pytest.raises(NumericFailure) as info:
        assemble_1d(spec, make_uniform_grid_1d(1.0, 4), np.zeros((3, 1)), 0.25)
    assert info.value.context["tau"] == 0.25
    assert "node" in info.value.context


def test_constant_field_zero_residual_without_drift():
    grid = make_uniform_grid_1d(3.0, 30)
    sys_ = assemble_1d(spec_1d(0.8, 0.0, 0.0, boundary=2.5), grid, np.zeros((29, 1)), 0.0)
    r = sys_.E @ np.full(29, 2.5) + sys_.F
    assert np.max(np.abs(r)) <= 1e-12 * np.max(np.abs(sys_.E.diagonal())) * 2.5


def test_constant_field_fluxes_telescope():
    grid = make_uniform_grid_1d(3.0, 30)
    b, V = 0.4, 1.5
    sys_ = assemble_1d(spec_1d(0.8, b, 0.0, boundary=V), grid, np.zeros((29, 1)), 0.0)
    r = sys_.E @ np.full(29, V) + sys_.F
    # sum of l_i (E v + F)_i = -(outflow at the last face - inflow at x_{1/2})
    total = np.sum(grid.cell_lengths[1:-1] * r)
    assert total == pytest.approx(-(grid.faces[-2] - grid.faces[1]) * b * V, rel=1e-12)


def test_consistency_with_analytic_operator():
    a, b, c = 0.3, 0.2, -0.1
    spec = spec_1d(a, b, c, boundary=lambda t, x: x**2)
    errs = []
    for n in (40, 80, 160):
        grid = make_uniform_grid_1d(1.0, n)
        x = grid.nodes[1:-1]
        sys_ = assemble_1d(spec, grid, np.zeros((n - 1, 1)), 0.0)
        Lv = (6 * a + 3 * b + c) * x**2  # d/dx(a x^2 2x + b x x^2) + c x^2
        errs.append(np.max(np.abs(-(sys_.E @ x**2 + sys_.F) - Lv)[x > 0.2]))
    assert errs[2] < errs[0] / 3.0


def test_scores_match_assembly():
    pr = bm.Merton1DParams(control_samples=7)
    spec = bm.build_problem(pr)
    grid = make_uniform_grid_1d(10, 40)
    disc = FittedVolume1D(spec, grid)
    v = bm.merton1d_exact(pr, 0.2, grid.nodes[1:-1])
    table = disc.scores(v, 0.2)
    for k, u in enumerate(spec.controls.values):
        sys_ = disc(u, 0.2)
        np.testing.assert_allclose(table[k], sys_.A @ v + sys_.G, rtol=1e-12, atol=1e-12)


def test_assembled_argmax_tracks_merton_control():
    pr = bm.Merton1DParams()
    spec = bm.build_problem(pr)
    grid = make_uniform_grid_1d(10, 300)
    disc = FittedVolume1D(spec, grid)
    v = bm.merton1d_exact(pr, 0.5, grid.nodes[1:-1])
    best = spec.controls.values[np.argmax(disc.scores(v, 0.5), axis=0)][:, 0]
    # the first few nodes sit in the layer where x^p is poorly resolved
    assert np.all(np.abs(best[6:] - pr.optimal_control) <= 0.01 + 1e-12)
