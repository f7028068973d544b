"""Standard finite-difference baseline for the same divergence-form problems.

The operator is expanded by the product rule,

    d/dx(a x^2 v_x + b x v) + c v
        = a x^2 v_xx + [(a x^2)_x + b x] v_x + [(b x)_x + c] v,

with coefficient derivatives taken as centred differences between the two
neighbouring cell faces, so nothing is evaluated at the degenerate point
itself. ``v_xx`` is centred and ``v_x`` is upwinded on the sign of the
effective drift. In 2D the mixed term ``2 d1 x y v_xy`` uses the four-corner
centred stencil.
"""

from __future__ import annotations

import numpy as np

from .discretization import AssembledSystem, Discretization, ProblemSpec1D, ProblemSpec2D, Stencil, evaluate, layout_1d, layout_2d
from .grid import Grid1D, Grid2D


def _second_order_rows(diff, drift, h_minus, h_plus):
    """Operator weights (lower, centre, upper) for ``diff v'' + drift v'``."""
    span = h_minus + h_plus
    lo = 2 * diff / (h_minus * span) + np.maximum(-drift, 0) / h_minus
    hi = 2 * diff / (h_plus * span) + np.maximum(drift, 0) / h_plus
    return lo, -(lo + hi), hi


class FiniteDifference1D(Discretization):
    """Upwind finite-difference operator; stencil columns (centre, west, east)."""

    def __init__(self, spec: ProblemSpec1D, grid: Grid1D):
        super().__init__(layout_1d(grid, spec.neumann_right), spec.controls, spec.time_dependent)
        self.spec = spec
        self.grid = grid
        i = np.arange(1, grid.n_cells)
        self._i = i
        self._cols = np.stack([i, i - 1, i + 1], axis=1)

    def stencil(self, alpha, tau) -> Stencil:
        spec, x, f, i = self.spec, self.grid.nodes, self.grid.faces, self._i
        ev = dict(shape=i.shape, nodes=i, alpha=alpha)
        xc, xe, xw = x[i], f[i + 1], f[i]
        span = xe - xw
        a_c = evaluate(spec.a, xc, tau, alpha, **ev)
        b_c = evaluate(spec.b, xc, tau, alpha, **ev)
        c = evaluate(spec.c, xc, tau, alpha, **ev)
        ax2_e = evaluate(spec.a, xe, tau, alpha, **ev) * xe**2
        ax2_w = evaluate(spec.a, xw, tau, alpha, **ev) * xw**2
        bx_e = evaluate(spec.b, xe, tau, alpha, **ev) * xe
        bx_w = evaluate(spec.b, xw, tau, alpha, **ev) * xw

        drift = (ax2_e - ax2_w) / span + b_c * xc
        react = (bx_e - bx_w) / span + c
        lo, mid, hi = _second_order_rows(a_c * xc**2, drift, xc - x[i - 1], x[i + 1] - xc)
        coef = -np.stack([mid + react, lo, hi], axis=1)
        return Stencil(coef, self._cols)

    def dirichlet_values(self, tau):
        d = self.layout.dirichlet
        return np.asarray(self.spec.boundary(tau, self.grid.nodes[d]), dtype=float) * np.ones(d.size)


class FiniteDifference2D(Discretization):
    """2D baseline; stencil columns (C, W, E, S, N, SW, SE, NW, NE)."""

    def __init__(self, spec: ProblemSpec2D, grid: Grid2D):
        super().__init__(layout_2d(grid, spec.neumann_x_max), spec.controls, spec.time_dependent)
        self.spec = spec
        self.grid = grid
        I, J = np.meshgrid(np.arange(1, grid.n1), np.arange(1, grid.n2), indexing="ij")
        I, J = I.ravel(), J.ravel()
        self._I, self._J = I, J
        fi = grid.full_index
        self._cols = np.stack(
            [fi(I, J), fi(I - 1, J), fi(I + 1, J), fi(I, J - 1), fi(I, J + 1),
             fi(I - 1, J - 1), fi(I + 1, J - 1), fi(I - 1, J + 1), fi(I + 1, J + 1)],
            axis=1,
        )

    def stencil(self, alpha, tau) -> Stencil:
        spec, g = self.spec, self.grid
        x, y, fx, fy = g.x_nodes, g.y_nodes, g.x.faces, g.y.faces
        I, J = self._I, self._J
        ev = dict(shape=I.shape, nodes=self._cols[:, 0], alpha=alpha)
        xc, yc = x[I], y[J]
        xe, xw, yn, ys = fx[I + 1], fx[I], fy[J + 1], fy[J]

        def at(f, xx, yy):
            return evaluate(f, xx, yy, tau, alpha, **ev)

        a_c, ab_c, d1_c = at(spec.a, xc, yc), at(spec.abar, xc, yc), at(spec.d1, xc, yc)
        b1_c, b2_c, c = at(spec.b1, xc, yc), at(spec.b2, xc, yc), at(spec.c, xc, yc)
        dx_span, dy_span = xe - xw, yn - ys
        d_ax2 = (at(spec.a, xe, yc) * xe**2 - at(spec.a, xw, yc) * xw**2) / dx_span
        d_ay2 = (at(spec.abar, xc, yn) * yn**2 - at(spec.abar, xc, ys) * ys**2) / dy_span
        d_dxy_y = xc * (at(spec.d1, xc, yn) * yn - at(spec.d1, xc, ys) * ys) / dy_span
        d_dxy_x = yc * (at(spec.d1, xe, yc) * xe - at(spec.d1, xw, yc) * xw) / dx_span
        d_b1x = (at(spec.b1, xe, yc) * xe - at(spec.b1, xw, yc) * xw) / dx_span
        d_b2y = (at(spec.b2, xc, yn) * yn - at(spec.b2, xc, ys) * ys) / dy_span

        drift_x = d_ax2 + d_dxy_y + b1_c * xc
        drift_y = d_ay2 + d_dxy_x + b2_c * yc
        xlo, xmid, xhi = _second_order_rows(a_c * xc**2, drift_x, xc - x[I - 1], x[I + 1] - xc)
        ylo, ymid, yhi = _second_order_rows(ab_c * yc**2, drift_y, yc - y[J - 1], y[J + 1] - yc)
        mixed = 2 * d1_c * xc * yc / ((x[I + 1] - x[I - 1]) * (y[J + 1] - y[J - 1]))
        react = d_b1x + d_b2y + c

        op = np.stack([xmid + ymid + react, xlo, xhi, ylo, yhi, mixed, -mixed, -mixed, mixed], axis=1)
        return Stencil(-op, self._cols)

    def dirichlet_values(self, tau):
        d = self.layout.dirichlet
        i, j = np.divmod(d, self.grid.n2 + 1)
        vals = self.spec.boundary(tau, self.grid.x_nodes[i], self.grid.y_nodes[j])
        return np.asarray(vals, dtype=float) * np.ones(d.size)


def assemble_fd_1d(spec: ProblemSpec1D, grid: Grid1D, alpha, tau: float) -> AssembledSystem:
    return FiniteDifference1D(spec, grid).assemble(alpha, tau)


def assemble_fd_2d(spec: ProblemSpec2D, grid: Grid2D, alpha, tau: float) -> AssembledSystem:
    return FiniteDifference2D(spec, grid).assemble(alpha, tau)
