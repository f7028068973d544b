"""Problem definitions and the stencil machinery shared by all assemblers.

Every spatial scheme here produces, for each unknown, a short list of
coefficients on *full-grid* nodes (interior and boundary alike). Boundary
closure is an affine map ``u_full = P v + q(tau)``: Dirichlet nodes take
prescribed values, Neumann nodes copy an interior neighbour plus an offset.
The assembled system is then ``E = S P`` and ``F = S q(tau)`` where ``S`` is the
stencil matrix, so ``E v + F`` is the stencil applied to the extended vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .control import ControlSet
from .errors import InvalidArgument, NumericFailure
from .grid import Grid1D, Grid2D

Coefficient = Callable[..., np.ndarray]


@dataclass(frozen=True)
class ProblemSpec1D:
    """Divergence-form HJB in one space dimension, in time-to-go ``tau``:

        v_tau = sup_alpha [ d/dx(a x^2 v_x + b x v) + c v ].

    Coefficients are called as ``f(x, tau, alpha)`` with ``alpha`` shaped
    ``(..., m)`` and must broadcast against ``x``.
    """

    a: Coefficient
    b: Coefficient
    c: Coefficient
    controls: ControlSet
    boundary: Callable[[float, np.ndarray], np.ndarray]
    terminal: Callable[[np.ndarray], np.ndarray]
    horizon: float
    time_dependent: bool = True
    neumann_right: float | None = None
    name: str = "problem1d"

    def __post_init__(self):
        if not self.horizon > 0:
            raise InvalidArgument("horizon must be positive")


@dataclass(frozen=True)
class ProblemSpec2D:
    """Two-dimensional analogue with diffusion matrix
    ``[[a x^2, d1 x y], [d1 x y, abar y^2]]`` and convection ``(x b1, y b2)``.

    Coefficients are called as ``f(x, y, tau, alpha)``. ``neumann_x_max``, if
    set, replaces the Dirichlet data on the open edge ``x = x_max`` by the
    slope condition ``v_x = neumann_x_max``.
    """

    a: Coefficient
    abar: Coefficient
    b1: Coefficient
    b2: Coefficient
    d1: Coefficient
    c: Coefficient
    controls: ControlSet
    boundary: Callable[[float, np.ndarray, np.ndarray], np.ndarray]
    terminal: Callable[[np.ndarray, np.ndarray], np.ndarray]
    horizon: float
    time_dependent: bool = True
    neumann_x_max: float | None = None
    name: str = "problem2d"

    def __post_init__(self):
        if not self.horizon > 0:
            raise InvalidArgument("horizon must be positive")


@dataclass(frozen=True)
class Stencil:
    """Row coefficients on full-grid nodes: row r reads ``coef[r] @ u_full[cols[r]]``."""

    coef: np.ndarray
    cols: np.ndarray

    def matrix(self, n_full: int) -> sp.csr_matrix:
        n, p = self.coef.shape
        rows = np.repeat(np.arange(n), p)
        return sp.csr_matrix((self.coef.ravel(), (rows, self.cols.ravel())), shape=(n, n_full))

    def apply(self, u_full: np.ndarray) -> np.ndarray:
        return np.einsum("np,np->n", self.coef, u_full[self.cols])


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """``E(tau, alpha)`` and ``F(tau, alpha)`` for a frozen control field.

    The semi-discrete equation is ``v_tau + E v + F = 0``; ``A = -E`` and
    ``G = -F`` give the sup-form ``v_tau = A v + G``.
    """

    E: sp.csr_matrix
    F: np.ndarray
    tau: float
    alpha: np.ndarray

    @property
    def A(self) -> sp.csr_matrix:
        return -self.E

    @property
    def G(self) -> np.ndarray:
        return -self.F

    @property
    def size(self) -> int:
        return self.F.size


@dataclass(frozen=True, eq=False)
class NodeLayout:
    """Which full-grid nodes are unknowns, Dirichlet data or Neumann copies."""

    n_full: int
    interior: np.ndarray
    dirichlet: np.ndarray
    neumann: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    neumann_source: np.ndarray = field(default_factory=lambda: np.zeros(0, int))
    neumann_offset: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        owned = np.concatenate([self.interior, self.dirichlet, self.neumann])
        if owned.size != self.n_full or np.unique(owned).size != self.n_full:
            raise InvalidArgument("node classes must partition the grid")

    @property
    def n(self) -> int:
        return self.interior.size

    def prolongation(self) -> sp.csr_matrix:
        rows = np.concatenate([self.interior, self.neumann])
        cols = np.concatenate([np.arange(self.n), self.neumann_source])
        return sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(self.n_full, self.n))

    def extend(self, v: np.ndarray, dirichlet_values: np.ndarray) -> np.ndarray:
        u = np.empty(self.n_full)
        u[self.interior] = v
        u[self.dirichlet] = dirichlet_values
        u[self.neumann] = v[self.neumann_source] + self.neumann_offset
        return u


def layout_1d(grid: Grid1D, neumann_right: float | None = None) -> NodeLayout:
    n = grid.n_cells
    interior = np.arange(1, n)
    if neumann_right is None:
        return NodeLayout(n + 1, interior, np.array([0, n]))
    x = grid.nodes
    return NodeLayout(
        n + 1,
        interior,
        np.array([0]),
        neumann=np.array([n]),
        neumann_source=np.array([n - 2]),
        neumann_offset=np.array([neumann_right * (x[n] - x[n - 1])]),
    )


def layout_2d(grid: Grid2D, neumann_x_max: float | None = None) -> NodeLayout:
    n1, n2 = grid.n1, grid.n2
    i, j = np.meshgrid(np.arange(n1 + 1), np.arange(n2 + 1), indexing="ij")
    on_boundary = (i == 0) | (i == n1) | (j == 0) | (j == n2)
    if neumann_x_max is None:
        dirichlet = grid.full_index(i[on_boundary], j[on_boundary])
        return NodeLayout((n1 + 1) * (n2 + 1), grid.interior_full, np.sort(dirichlet))
    jj = np.arange(1, n2)
    neumann = grid.full_index(n1, jj)
    dirichlet = np.setdiff1d(grid.full_index(i[on_boundary], j[on_boundary]), neumann)
    x = grid.x_nodes
    return NodeLayout(
        (n1 + 1) * (n2 + 1),
        grid.interior_full,
        dirichlet,
        neumann=neumann,
        neumann_source=grid.interior_index(n1 - 1, jj),
        neumann_offset=np.full(jj.size, neumann_x_max * (x[n1] - x[n1 - 1])),
    )


def evaluate(f, *args, shape, nodes=None, alpha=None) -> np.ndarray:
    """Call a coefficient function and broadcast the result to ``shape``.

    Non-finite output raises :class:`NumericFailure` naming the first bad
    entry; ``nodes`` maps flat result positions to node labels for the message.
    """
    with np.errstate(all="ignore"):
        out = np.broadcast_to(np.asarray(f(*args), dtype=float), shape)
    bad = ~np.isfinite(out)
    if bad.any():
        k = int(np.flatnonzero(bad.ravel())[0])
        ctx = {"node": k if nodes is None else nodes.ravel()[k], "tau": args[-2]}
        if alpha is not None:
            a = np.asarray(alpha)
            ctx["alpha"] = a.reshape(-1, a.shape[-1])[k % a.reshape(-1, a.shape[-1]).shape[0]].tolist()
        raise NumericFailure(f"coefficient {getattr(f, '__name__', 'f')!r} is not finite", **ctx)
    return out


class Discretization:
    """Base class for stencil-based spatial operators.

    Subclasses implement :meth:`stencil` and :meth:`dirichlet_values`.
    Instances are callable as ``disc(alpha, tau) -> AssembledSystem`` and
    provide :meth:`scores`, the per-control table of ``[A v + G]_i`` used by the
    policy-iteration argmax.
    """

    #: bound on K * n * P floats kept in the per-control stencil cache
    cache_limit = 25_000_000

    def __init__(self, layout: NodeLayout, controls: ControlSet, time_dependent: bool = True):
        self.layout = layout
        self.controls = controls
        self.time_dependent = time_dependent
        self._P = layout.prolongation()
        self._cache = None

    @property
    def n(self) -> int:
        return self.layout.n

    def stencil(self, alpha: np.ndarray, tau: float) -> Stencil:
        raise NotImplementedError

    def dirichlet_values(self, tau: float) -> np.ndarray:
        raise NotImplementedError

    def extend(self, v, tau) -> np.ndarray:
        return self.layout.extend(np.asarray(v, dtype=float), self.dirichlet_values(tau))

    def _field(self, alpha) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        m = self.controls.dim
        if alpha.ndim == 1 and m == 1 and alpha.size == self.n:
            alpha = alpha[:, None]
        return np.broadcast_to(alpha, (self.n, m))

    def assemble(self, alpha, tau: float) -> AssembledSystem:
        alpha = self._field(alpha)
        st = self.stencil(alpha, tau)
        S = st.matrix(self.layout.n_full)
        E = (S @ self._P).tocsr()
        E.sum_duplicates()
        E.sort_indices()
        F = S @ self.extend(np.zeros(self.n), tau)
        return AssembledSystem(E, F, float(tau), np.array(alpha))

    __call__ = assemble

    def _control_stencils(self, tau):
        """Yield (start, coef block (k, n, P), cols) over the enumerated controls."""
        controls = self.controls.values
        K = len(controls)
        if not self.time_dependent and self._cache is not None:
            coef, cols = self._cache
            yield 0, coef, cols
            return
        first = self.stencil(np.broadcast_to(controls[0], (self.n, controls.shape[1])), tau)
        P = first.coef.shape[1]
        cacheable = not self.time_dependent and K * self.n * P <= self.cache_limit
        chunk = K if cacheable else max(1, self.cache_limit // (8 * self.n * P))
        blocks = []
        for start in range(0, K, chunk):
            stop = min(K, start + chunk)
            coef = np.empty((stop - start, self.n, P))
            for k in range(start, stop):
                st = first if k == 0 else self.stencil(np.broadcast_to(controls[k], (self.n, controls.shape[1])), tau)
                coef[k - start] = st.coef
            if cacheable:
                blocks.append(coef)
            else:
                yield start, coef, first.cols
        if cacheable:
            coef = np.concatenate(blocks) if len(blocks) > 1 else blocks[0]
            self._cache = (coef, first.cols)
            yield 0, coef, first.cols

    def scores(self, v, tau) -> np.ndarray:
        """``[A(u_k) v + G(u_k)]_i`` for every enumerated control ``u_k``; shape (K, n)."""
        u = self.extend(v, tau)
        out = np.empty((len(self.controls), self.n))
        for start, coef, cols in self._control_stencils(tau):
            out[start:start + coef.shape[0]] = -np.einsum("knp,np->kn", coef, u[cols])
        return out
