"""Fitted finite-volume discretisation of the 1D divergence-form operator.

On an interior cell face the flux ``a x v_x + b v`` is replaced by the exact
flux of the local two-point problem with frozen ``a`` and ``b``. Writing
``beta = b/a`` and ``q = (x_r/x_l)**beta``, that flux is

    rho = b (x_r^beta v_r - x_l^beta v_l) / (x_r^beta - x_l^beta)
        = w_hi v_r - w_lo v_l,   w_lo = b/(q-1),  w_hi = b q/(q-1).

Both weights are evaluated through ``expm1`` so that neither large ``|beta|``
nor ``b -> 0`` loses precision. On the first cell, which touches the
degenerate point ``x = 0``, the flux is ``((a+b) v_1 - (a-b) v_0) / 2``.
"""

from __future__ import annotations

import numpy as np

from .discretization import AssembledSystem, Discretization, ProblemSpec1D, Stencil, evaluate, layout_1d
from .errors import DomainError
from .grid import Grid1D

#: relative size of |b| below which the weights switch to the b -> 0 limit a / ln(x_r/x_l)
B_ZERO_THRESHOLD = 1e-8


def fitted_weights(a, b, x_left, x_right):
    """Return ``(w_lo, w_hi)`` with fitted flux ``w_hi * v_right - w_lo * v_left``."""
    a, b, x_left, x_right = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, x_left, x_right)))
    if np.any(x_left <= 0) or np.any(x_right <= x_left):
        raise DomainError("fitted flux needs 0 < x_left < x_right")
    if np.any(~(a > 0)):
        raise DomainError("fitted flux needs a > 0")
    log_ratio = np.log(x_right / x_left)
    small = np.abs(b) < B_ZERO_THRESHOLD * np.maximum(1.0, np.abs(a))
    z = np.where(small, 1.0, b / a * log_ratio)
    bb = np.where(small, 1.0, b)
    with np.errstate(over="ignore"):
        w_lo = bb / np.expm1(z)
        w_hi = -bb / np.expm1(-z)
    limit = a / log_ratio
    return np.where(small, limit, w_lo), np.where(small, limit, w_hi)


def fitted_flux_interior(a_mid, b_mid, x_i, x_ip1, v_i, v_ip1):
    """Fitted approximation of ``a x v_x + b v`` at ``x_{i+1/2}`` for ``x_i > 0``."""
    w_lo, w_hi = fitted_weights(a_mid, b_mid, x_i, x_ip1)
    return w_hi * v_ip1 - w_lo * v_i


def fitted_flux_degenerate(a_half, b_half, v_0, v_1):
    """Flux at ``x_{1/2}`` on the cell ``[0, x_1]`` where the diffusion vanishes."""
    return 0.5 * ((a_half + b_half) * v_1 - (a_half - b_half) * v_0)


class FittedVolume1D(Discretization):
    """Fitted finite-volume operator for a :class:`ProblemSpec1D` on a :class:`Grid1D`.

    Row ``i`` (node ``x_i``, i = 1..N-1) uses the row's own control ``alpha_i``
    on both of its faces, so each row depends on a single control value.
    """

    def __init__(self, spec: ProblemSpec1D, grid: Grid1D):
        super().__init__(layout_1d(grid, spec.neumann_right), spec.controls, spec.time_dependent)
        self.spec = spec
        self.grid = grid
        x = grid.nodes
        n = grid.n_cells
        i = np.arange(1, n)
        self._i = i
        self._cols = np.stack([i, i - 1, i + 1], axis=1)
        self._len = grid.cell_lengths[i]
        self._xe = grid.faces[i + 1]
        self._xw = grid.faces[i]
        self._xc = x[i]

    def stencil(self, alpha, tau) -> Stencil:
        spec, x, i = self.spec, self.grid.nodes, self._i
        shape = i.shape
        ev = dict(shape=shape, nodes=i, alpha=alpha)
        a_e = evaluate(spec.a, self._xe, tau, alpha, **ev)
        b_e = evaluate(spec.b, self._xe, tau, alpha, **ev)
        a_w = evaluate(spec.a, self._xw, tau, alpha, **ev)
        b_w = evaluate(spec.b, self._xw, tau, alpha, **ev)
        c = evaluate(spec.c, self._xc, tau, alpha, **ev)

        elo, ehi = fitted_weights(a_e, b_e, x[i], x[i + 1])
        wlo = np.empty(shape)
        whi = np.empty(shape)
        wlo[1:], whi[1:] = fitted_weights(a_w[1:], b_w[1:], x[i[1:] - 1], x[i[1:]])
        # degenerate first cell
        wlo[0] = 0.5 * (a_w[0] - b_w[0])
        whi[0] = 0.5 * (a_w[0] + b_w[0])

        coef = np.empty((shape[0], 3))
        coef[:, 0] = (self._xe * elo + self._xw * whi) / self._len - c
        coef[:, 1] = -self._xw * wlo / self._len
        coef[:, 2] = -self._xe * ehi / self._len
        return Stencil(coef, self._cols)

    def dirichlet_values(self, tau):
        d = self.layout.dirichlet
        return np.asarray(self.spec.boundary(tau, self.grid.nodes[d]), dtype=float) * np.ones(d.size)


def assemble_1d(spec: ProblemSpec1D, grid: Grid1D, alpha, tau: float) -> AssembledSystem:
    return FittedVolume1D(spec, grid).assemble(alpha, tau)
