"""Fitted finite-volume discretisation in two space dimensions.

Each control volume ``[x_{i-1/2}, x_{i+1/2}] x [y_{j-1/2}, y_{j+1/2}]`` gets
four face fluxes, each evaluated at the face midpoint and multiplied by the
face length. Normal fluxes use the 1D fitted weights (the degenerate form
on faces touching ``x = 0`` or ``y = 0``). The mixed-derivative part of each
flux is a forward difference in the tangential direction, with ``d1`` taken
at the node. This gives a five-point stencil.
"""

from __future__ import annotations

import numpy as np

from .discretization import AssembledSystem, Discretization, ProblemSpec2D, Stencil, evaluate, layout_2d
from .assembly_1d import fitted_flux_degenerate, fitted_flux_interior, fitted_weights
from .grid import Grid2D


def _face_weights(a, b, lo, hi, degenerate):
    """Fitted weights on a batch of faces; entries flagged ``degenerate`` use the x=0 cell form."""
    w_lo = 0.5 * (a - b)
    w_hi = 0.5 * (a + b)
    ok = ~degenerate
    if ok.any():
        w_lo[ok], w_hi[ok] = fitted_weights(a[ok], b[ok], lo[ok], hi[ok])
    return w_lo, w_hi


class FittedVolume2D(Discretization):
    """Fitted finite-volume operator for a :class:`ProblemSpec2D`.

    Stencil columns are ordered (centre, west, east, south, north).
    """

    def __init__(self, spec: ProblemSpec2D, grid: Grid2D):
        super().__init__(layout_2d(grid, spec.neumann_x_max), spec.controls, spec.time_dependent)
        self.spec = spec
        self.grid = grid
        I, J = np.meshgrid(np.arange(1, grid.n1), np.arange(1, grid.n2), indexing="ij")
        I, J = I.ravel(), J.ravel()
        self._I, self._J = I, J
        fi = grid.full_index
        self._cols = np.stack([fi(I, J), fi(I - 1, J), fi(I + 1, J), fi(I, J - 1), fi(I, J + 1)], axis=1)
        self._hx = grid.hx[I]
        self._hy = grid.hy[J]

    def stencil(self, alpha, tau) -> Stencil:
        spec, g = self.spec, self.grid
        x, y = g.x_nodes, g.y_nodes
        fx, fy = g.x.faces, g.y.faces
        I, J, hx, hy = self._I, self._J, self._hx, self._hy
        xc, yc = x[I], y[J]
        xe, xw = fx[I + 1], fx[I]
        yn, ys = fy[J + 1], fy[J]
        ev = dict(shape=I.shape, nodes=self._cols[:, 0], alpha=alpha)

        a_e = evaluate(spec.a, xe, yc, tau, alpha, **ev)
        b_e = evaluate(spec.b1, xe, yc, tau, alpha, **ev)
        a_w = evaluate(spec.a, xw, yc, tau, alpha, **ev)
        b_w = evaluate(spec.b1, xw, yc, tau, alpha, **ev)
        a_n = evaluate(spec.abar, xc, yn, tau, alpha, **ev)
        b_n = evaluate(spec.b2, xc, yn, tau, alpha, **ev)
        a_s = evaluate(spec.abar, xc, ys, tau, alpha, **ev)
        b_s = evaluate(spec.b2, xc, ys, tau, alpha, **ev)
        d1 = evaluate(spec.d1, xc, yc, tau, alpha, **ev)
        c = evaluate(spec.c, xc, yc, tau, alpha, **ev)

        elo, ehi = fitted_weights(a_e, b_e, xc, x[I + 1])
        wlo, whi = _face_weights(a_w, b_w, x[I - 1], xc, I == 1)
        nlo, nhi = fitted_weights(a_n, b_n, yc, y[J + 1])
        slo, shi = _face_weights(a_s, b_s, y[J - 1], yc, J == 1)

        cross_x = d1 * xc / hx
        cross_y = d1 * yc / hy
        coef = np.empty((I.size, 5))
        coef[:, 0] = (xe * elo + xw * whi) / hx + (yn * nlo + ys * shi) / hy + cross_x + cross_y - c
        coef[:, 1] = -xw * wlo / hx
        coef[:, 2] = -xe * ehi / hx - cross_x
        coef[:, 3] = -ys * slo / hy
        coef[:, 4] = -yn * nhi / hy - cross_y
        return Stencil(coef, self._cols)

    def dirichlet_values(self, tau):
        d = self.layout.dirichlet
        i, j = np.divmod(d, self.grid.n2 + 1)
        vals = self.spec.boundary(tau, self.grid.x_nodes[i], self.grid.y_nodes[j])
        return np.asarray(vals, dtype=float) * np.ones(d.size)


def assemble_2d(spec: ProblemSpec2D, grid: Grid2D, alpha, tau: float) -> AssembledSystem:
    return FittedVolume2D(spec, grid).assemble(alpha, tau)


def _alpha_row(alpha):
    return np.atleast_1d(np.asarray(alpha, dtype=float))


def flux_east_2d(spec: ProblemSpec2D, grid: Grid2D, i: int, j: int, alpha, tau: float, v: np.ndarray) -> float:
    """Integrated flux through the east face of cell (i, j), i >= 1.

    ``v`` holds nodal values on the full (N1+1, N2+1) grid.
    """
    x, y = grid.x_nodes, grid.y_nodes
    xe = grid.x.faces[i + 1]
    hy = grid.hy[j]
    alpha = _alpha_row(alpha)
    a = float(spec.a(xe, y[j], tau, alpha))
    b1 = float(spec.b1(xe, y[j], tau, alpha))
    d1 = float(spec.d1(x[i], y[j], tau, alpha))
    normal = fitted_flux_interior(a, b1, x[i], x[i + 1], v[i, j], v[i + 1, j])
    return float(xe * (normal + d1 * y[j] * (v[i, j + 1] - v[i, j]) / hy) * hy)


def flux_degenerate_x(spec: ProblemSpec2D, grid: Grid2D, j: int, alpha, tau: float, v: np.ndarray) -> float:
    """Integrated flux through the face ``x = x_{1/2}`` of cell (1, j)."""
    x, y = grid.x_nodes, grid.y_nodes
    xh = grid.x.faces[1]
    hy = grid.hy[j]
    alpha = _alpha_row(alpha)
    a = float(spec.a(xh, y[j], tau, alpha))
    b1 = float(spec.b1(xh, y[j], tau, alpha))
    d1 = float(spec.d1(x[1], y[j], tau, alpha))
    normal = fitted_flux_degenerate(a, b1, v[0, j], v[1, j])
    return float(xh * (normal + d1 * y[j] * (v[1, j + 1] - v[1, j]) / hy) * hy)
