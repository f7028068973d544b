"""Structured meshes on [0, x_max] and [0, x_max] x [0, y_max].

Nodes ``x_0 = 0 < x_1 < ... < x_N = x_max``. Control-volume faces sit at the
midpoints ``x_{i+1/2}``, with the end faces pinned to the domain ends
(``x_{-1/2} = x_0`` and ``x_{N+1/2} = x_max``), so the cells ``l_i`` tile the
interval. Nodes 1..N-1 carry unknowns; nodes 0 and N hold boundary data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidArgument


@dataclass(frozen=True, eq=False)
class Grid1D:
    nodes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise InvalidArgument("need at least 3 nodes (2 cells)")
        if x[0] != 0.0:
            raise InvalidArgument(f"first node must be exactly 0, got {x[0]!r}")
        if not np.all(np.diff(x) > 0):
            raise InvalidArgument("nodes must be strictly increasing")
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)

    @property
    def n_cells(self) -> int:
        return self.nodes.size - 1

    @property
    def x_max(self) -> float:
        return float(self.nodes[-1])

    @cached_property
    def faces(self) -> np.ndarray:
        """Face coordinates; ``faces[k] = x_{k-1/2}`` for k = 0..N+1."""
        x = self.nodes
        f = np.empty(x.size + 1)
        f[0] = x[0]
        f[1:-1] = 0.5 * (x[:-1] + x[1:])
        f[-1] = x[-1]
        f.setflags(write=False)
        return f

    @property
    def midpoints(self) -> np.ndarray:
        return self.faces

    @cached_property
    def cell_lengths(self) -> np.ndarray:
        """``l_i = x_{i+1/2} - x_{i-1/2}`` for i = 0..N."""
        out = np.diff(self.faces)
        out.setflags(write=False)
        return out

    @property
    def h(self) -> float:
        return float(self.cell_lengths.max())

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def n_interior(self) -> int:
        return self.nodes.size - 2


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Tensor-product mesh. Unknowns are ordered x-major:
    ``(1,1), (1,2), ..., (1,N2-1), (2,1), ..., (N1-1,N2-1)``.
    """

    x: Grid1D
    y: Grid1D

    @property
    def n1(self) -> int:
        return self.x.n_cells

    @property
    def n2(self) -> int:
        return self.y.n_cells

    @property
    def x_nodes(self) -> np.ndarray:
        return self.x.nodes

    @property
    def y_nodes(self) -> np.ndarray:
        return self.y.nodes

    @property
    def hx(self) -> np.ndarray:
        return self.x.cell_lengths

    @property
    def hy(self) -> np.ndarray:
        return self.y.cell_lengths

    @cached_property
    def cell_areas(self) -> np.ndarray:
        """``l_{i,j} = hx_i * hy_j`` on the full (N1+1, N2+1) index range."""
        return np.outer(self.hx, self.hy)

    @property
    def n_interior(self) -> int:
        return (self.n1 - 1) * (self.n2 - 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1 + 1, self.n2 + 1)

    @property
    def h(self) -> float:
        return float(self.cell_areas[1:-1, 1:-1].max())

    def interior_index(self, i, j):
        """Flat unknown index of interior node (i, j), 1 <= i <= N1-1, 1 <= j <= N2-1."""
        i = np.asarray(i)
        j = np.asarray(j)
        if np.any((i < 1) | (i > self.n1 - 1) | (j < 1) | (j > self.n2 - 1)):
            raise InvalidArgument("not an interior node")
        return (i - 1) * (self.n2 - 1) + (j - 1)

    def interior_ij(self, k):
        """Inverse of :meth:`interior_index`."""
        k = np.asarray(k)
        if np.any((k < 0) | (k >= self.n_interior)):
            raise InvalidArgument("flat index out of range")
        i, j = np.divmod(k, self.n2 - 1)
        return i + 1, j + 1

    def full_index(self, i, j):
        return np.asarray(i) * (self.n2 + 1) + np.asarray(j)

    @cached_property
    def interior_full(self) -> np.ndarray:
        """Full-grid flat indices of the unknowns, in unknown order."""
        i, j = np.meshgrid(np.arange(1, self.n1), np.arange(1, self.n2), indexing="ij")
        return self.full_index(i, j).ravel()

    def mesh(self):
        return np.meshgrid(self.x.nodes, self.y.nodes, indexing="ij")


def make_uniform_grid_1d(x_max: float, n_cells: int) -> Grid1D:
    if not (x_max > 0) or not np.isfinite(x_max):
        raise InvalidArgument(f"x_max must be positive, got {x_max!r}")
    if int(n_cells) != n_cells or n_cells < 2:
        raise InvalidArgument(f"n_cells must be an integer >= 2, got {n_cells!r}")
    return Grid1D(np.linspace(0.0, x_max, int(n_cells) + 1))


def make_uniform_grid_2d(x_max: float, y_max: float, n1: int, n2: int) -> Grid2D:
    return Grid2D(make_uniform_grid_1d(x_max, n1), make_uniform_grid_1d(y_max, n2))
