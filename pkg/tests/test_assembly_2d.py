import numpy as np
import pytest

from fitted_hjb.assembly_1d import assemble_1d
from fitted_hjb.assembly_2d import FittedVolume2D, assemble_2d, flux_degenerate_x, flux_east_2d
from fitted_hjb.grid import Grid1D, Grid2D, make_uniform_grid_1d, make_uniform_grid_2d
from fitted_hjb.sparse_linalg import check_m_matrix
from helpers import power_form_flux, spec_1d, spec_2d

G = Grid2D(Grid1D(np.array([0.0, 1.0, 2.0, 3.0])), Grid1D(np.array([0.0, 1.0, 2.0])))


def test_flux_east_worked_example():
    spec = spec_2d(a=0.5, b1=1.0, d1=0.25)
    v = np.zeros(G.shape)
    v[1, 1], v[2, 1], v[1, 2] = 1.0, 4.0, 2.0
    assert flux_east_2d(spec, G, 1, 1, [0.0], 0.0, v) == pytest.approx(7.875, rel=1e-14)


def test_flux_east_constant_field():
    spec = spec_2d(a=0.5, b1=-0.7, d1=3.0)
    v = np.full(G.shape, 2.0)
    assert flux_east_2d(spec, G, 1, 1, [0.0], 0.0, v) == pytest.approx(1.5 * -0.7 * 2.0 * 1.0)


def test_flux_east_without_cross_term_is_1d_flux():
    spec = spec_2d(a=0.5, b1=1.0, d1=0.0)
    v = np.random.default_rng(0).uniform(size=G.shape)
    hy = G.hy[1]
    expected = 1.5 * power_form_flux(0.5, 1.0, 1.0, 2.0, v[1, 1], v[2, 1]) * hy
    assert flux_east_2d(spec, G, 1, 1, [0.0], 0.0, v) == pytest.approx(expected, rel=1e-12)


def test_degenerate_x_flux():
    v = np.zeros(G.shape)
    v[0, 1], v[1, 1], v[1, 2] = 2.0, 4.0, 4.0
    spec = spec_2d(a=1.0, b1=0.5, d1=0.0)
    xh, hy = G.x.faces[1], G.hy[1]
    assert flux_degenerate_x(spec, G, 1, [0.0], 0.0, v) == pytest.approx(2.5 * xh * hy)
    spec = spec_2d(a=0.6, b1=0.6, d1=0.0)
    v[0, 1] = 1e6
    assert flux_degenerate_x(spec, G, 1, [0.0], 0.0, v) == pytest.approx(xh * 0.6 * 4.0 * hy)
    w = np.full(G.shape, 3.0)
    assert flux_degenerate_x(spec_2d(a=0.2, b1=0.1, d1=0.4), G, 1, [0.0], 0.0, w) == pytest.approx(xh * 0.1 * 3.0 * hy)


def test_single_unknown_hand_assembly():
    a, b1, ab, b2, d1, c = 1.0, 0.5, 2.0, -0.3, 0.1, -1.0
    g = make_uniform_grid_2d(1, 1, 2, 2)
    E = assemble_2d(spec_2d(a, ab, b1, b2, d1, c), g, np.zeros((1, 1)), 0.0).E.toarray()
    x = y = 0.5
    hx = hy = 0.5
    xe, xw = 0.75, 0.25
    elo = b1 * x ** (b1 / a) / (1.0 ** (b1 / a) - x ** (b1 / a))
    nlo = b2 * y ** (b2 / ab) / (1.0 ** (b2 / ab) - y ** (b2 / ab))
    expected = (xe * elo + xw * 0.5 * (a + b1)) / hx + (xe * nlo + xw * 0.5 * (ab + b2)) / hy + d1 * (x / hx + y / hy) - c
    assert E.shape == (1, 1)
    assert E[0, 0] == pytest.approx(expected, rel=1e-12)


def test_zero_boundary_gives_zero_F():
    g = make_uniform_grid_2d(1, 1, 5, 4)
    assert np.all(assemble_2d(spec_2d(0.5, 0.4, 0.2, -0.1, 0.3, -0.5), g, np.zeros((12, 1)), 0.0).F == 0)


def test_five_point_pattern():
    g = make_uniform_grid_2d(1, 1, 6, 5)
    E = assemble_2d(spec_2d(0.5, 0.4, 0.2, -0.1, 0.3, -0.5), g, np.zeros((g.n_interior, 1)), 0.0).E
    assert np.diff(E.indptr).max() == 5
    coo = E.tocoo()
    assert set(np.unique(coo.col - coo.row)) <= {0, 1, -1, g.n2 - 1, -(g.n2 - 1)}


def test_reduces_to_1d_rows():
    a, b, c = 0.35, 0.25, -0.2
    gx = make_uniform_grid_1d(2.0, 12)
    g = Grid2D(gx, make_uniform_grid_1d(1.0, 7))
    bc = lambda t, x: 1.0 + x**2  # noqa: E731
    s1 = spec_1d(a, b, c, boundary=bc)
    s2 = spec_2d(a, 0.9, b, 0.0, 0.0, c, boundary=lambda t, x, y: bc(t, x) + 0 * y)
    sys1 = assemble_1d(s1, gx, np.zeros((11, 1)), 0.0)
    sys2 = assemble_2d(s2, g, np.zeros((g.n_interior, 1)), 0.0)
    v1 = bc(0.0, gx.nodes[1:-1])
    v2 = np.repeat(v1, g.n2 - 1)
    r1 = sys1.E @ v1 + sys1.F
    r2 = (sys2.E @ v2 + sys2.F).reshape(g.n1 - 1, g.n2 - 1)
    for j in range(g.n2 - 1):
        np.testing.assert_allclose(r2[:, j], r1, rtol=1e-10, atol=1e-10 * np.abs(r1).max())


def test_axis_swap_permutes_system():
    g = make_uniform_grid_2d(2.0, 1.0, 6, 5)
    gs = make_uniform_grid_2d(1.0, 2.0, 5, 6)
    coef = dict(a=0.5, abar=0.3, b1=0.2, b2=-0.15, d1=0.05, c=-0.4)
    E = assemble_2d(spec_2d(**coef), g, np.zeros((g.n_interior, 1)), 0.0).E.toarray()
    swapped = dict(coef, a=coef["abar"], abar=coef["a"], b1=coef["b2"], b2=coef["b1"])
    Es = assemble_2d(spec_2d(**swapped), gs, np.zeros((gs.n_interior, 1)), 0.0).E.toarray()
    i, j = g.interior_ij(np.arange(g.n_interior))
    perm = gs.interior_index(j, i)
    np.testing.assert_allclose(Es[np.ix_(perm, perm)], E, rtol=1e-13, atol=1e-13)


def test_constant_field_zero_residual_without_drift():
    g = make_uniform_grid_2d(1, 1, 9, 8)
    sys_ = assemble_2d(spec_2d(0.5, 0.4, 0.0, 0.0, 0.0, 0.0, boundary=3.0), g, np.zeros((g.n_interior, 1)), 0.0)
    r = sys_.E @ np.full(g.n_interior, 3.0) + sys_.F
    assert np.max(np.abs(r)) <= 1e-12 * 3.0 * np.abs(sys_.E.diagonal()).max()


def test_cross_term_does_not_change_row_sums():
    g = make_uniform_grid_2d(1, 1, 7, 6)
    base = dict(a=0.5, abar=0.4, b1=0.2, b2=-0.1, c=-0.5)
    E0 = assemble_2d(spec_2d(d1=0.0, **base), g, np.zeros((g.n_interior, 1)), 0.0).E
    E1 = assemble_2d(spec_2d(d1=0.7, **base), g, np.zeros((g.n_interior, 1)), 0.0).E
    # the cross term only moves weight between the centre and the E / N neighbours
    interior = [k for k in range(g.n_interior) if all(q < n - 1 for q, n in zip(g.interior_ij(k), (g.n1, g.n2)))]
    np.testing.assert_allclose(np.asarray(E1.sum(axis=1)).ravel()[interior], np.asarray(E0.sum(axis=1)).ravel()[interior], atol=1e-12)


def test_m_matrix_when_drift_is_dominated():
    g = make_uniform_grid_2d(1, 1, 20, 20)
    E = assemble_2d(spec_2d(0.5, 0.4, -0.2, -0.1, 0.3, -0.5), g, np.zeros((g.n_interior, 1)), 0.0).E
    assert check_m_matrix(E).verdict


def test_scores_vectorised_over_controls():
    from fitted_hjb import benchmarks as bm

    pr = bm.Merton2DParams(control_samples=3)
    spec = bm.build_problem(pr)
    g = make_uniform_grid_2d(1, 1, 6, 5)
    disc = FittedVolume2D(spec, g)
    X, Y = g.mesh()
    v = bm.merton2d_ansatz(pr, 0.1, X[1:-1, 1:-1], Y[1:-1, 1:-1]).ravel()
    table = disc.scores(v, 0.1)
    for k, u in enumerate(spec.controls.values):
        s = disc(u, 0.1)
        np.testing.assert_allclose(table[k], s.A @ v + s.G, rtol=1e-12, atol=1e-13)
