import numpy as np
import pytest

from fitted_hjb.fd_baseline import assemble_fd_1d, assemble_fd_2d
from fitted_hjb.grid import make_uniform_grid_1d, make_uniform_grid_2d
from helpers import spec_1d, spec_2d


def test_pure_diffusion_stencil():
    grid = make_uniform_grid_1d(1.0, 10)
    h = 0.1
    E = assemble_fd_1d(spec_1d(1.0, 0.0, 0.0), grid, np.zeros((9, 1)), 0.0).E.toarray()
    x = grid.nodes[1:-1]
    for k in range(1, 8):
        xi = x[k]
        # x^2 [1, -2, 1] / h^2 plus the upwinded drift (a x^2)_x = 2x
        assert -E[k, k - 1] == pytest.approx(xi**2 / h**2)
        assert -E[k, k] == pytest.approx(-2 * xi**2 / h**2 - 2 * xi / h)
        assert -E[k, k + 1] == pytest.approx(xi**2 / h**2 + 2 * xi / h)


def test_zero_boundary():
    assert np.all(assemble_fd_1d(spec_1d(0.5, 0.3, -0.2), make_uniform_grid_1d(1, 6), np.zeros((5, 1)), 0).F == 0)
    g = make_uniform_grid_2d(1, 1, 5, 5)
    assert np.all(assemble_fd_2d(spec_2d(0.5, 0.4, 0.2, 0.1, 0.2, -0.3), g, np.zeros((16, 1)), 0).F == 0)


def test_constant_field_residual():
    grid = make_uniform_grid_1d(1.0, 12)
    sys_ = assemble_fd_1d(spec_1d(0.7, 0.0, 0.0, boundary=2.0), grid, np.zeros((11, 1)), 0.0)
    assert np.max(np.abs(sys_.E @ np.full(11, 2.0) + sys_.F)) <= 1e-10
    g = make_uniform_grid_2d(1, 1, 6, 7)
    sys_ = assemble_fd_2d(spec_2d(0.7, 0.4, 0.0, 0.0, 0.3, 0.0, boundary=2.0), g, np.zeros((g.n_interior, 1)), 0.0)
    assert np.max(np.abs(sys_.E @ np.full(g.n_interior, 2.0) + sys_.F)) <= 1e-10


def _analytic_1d(a, b, c, x):
    return a * 6 * x**2 + b * 3 * x**2 + c * x**2


@pytest.mark.parametrize("which", ["fd", "fitted"])
def test_consistency_rate(which):
    from fitted_hjb.assembly_1d import assemble_1d

    a, b, c = 0.3, 0.2, -0.1
    spec = spec_1d(a, b, c, boundary=lambda t, x: x**2)
    assemble = assemble_fd_1d if which == "fd" else assemble_1d
    errs = []
    for n in (20, 40, 80, 160):
        g = make_uniform_grid_1d(1.0, n)
        x = g.nodes[1:-1]
        s = assemble(spec, g, np.zeros((n - 1, 1)), 0.0)
        errs.append(np.max(np.abs(-(s.E @ x**2 + s.F) - _analytic_1d(a, b, c, x))))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert errs[-1] < errs[0]
    assert rates[-1] >= 0.9


def test_fd_2d_consistency_with_mixed_term():
    a, ab, b1, b2, d1, c = 0.3, 0.25, 0.2, -0.1, 0.15, -0.1
    v = lambda x, y: np.sin(x + 0.3) * np.exp(y)  # noqa: E731
    spec = spec_2d(a, ab, b1, b2, d1, c, boundary=lambda t, x, y: v(x, y))

    def L(x, y):
        s, co, e = np.sin(x + 0.3), np.cos(x + 0.3), np.exp(y)
        vx, vy, vxx, vyy, vxy = co * e, s * e, -s * e, s * e, co * e
        return (a * (2 * x * vx + x * x * vxx) + b1 * (s * e + x * vx) + ab * (2 * y * vy + y * y * vyy)
                + b2 * (s * e + y * vy) + d1 * (y * vy + x * vx + 2 * x * y * vxy) + c * s * e)

    errs = []
    for n in (10, 20, 40):
        g = make_uniform_grid_2d(1, 1, n, n)
        X, Y = g.mesh()
        Xi, Yi = X[1:-1, 1:-1].ravel(), Y[1:-1, 1:-1].ravel()
        s = assemble_fd_2d(spec, g, np.zeros((g.n_interior, 1)), 0.0)
        errs.append(np.max(np.abs(-(s.E @ v(Xi, Yi) + s.F) - L(Xi, Yi))))
    assert errs[2] < errs[1] < errs[0]
    assert errs[1] / errs[2] > 1.8
