"""Box-shaped admissible control sets and the per-node grid-search argmax."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidArgument, NumericFailure


@dataclass(frozen=True)
class ControlSet:
    """Closed box ``prod_k [lower_k, upper_k]`` sampled on a tensor grid.

    A degenerate axis (``lower == upper``) with one sample is allowed; it is how
    a fixed, non-optimised control is expressed.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    samples: tuple[int, ...]

    def __post_init__(self):
        lo, hi, ns = (tuple(np.atleast_1d(v).tolist()) for v in (self.lower, self.upper, self.samples))
        if not (len(lo) == len(hi) == len(ns)) or len(lo) == 0:
            raise InvalidArgument("lower, upper and samples must have the same non-zero length")
        for l, u, n in zip(lo, hi, ns):
            if not (np.isfinite(l) and np.isfinite(u)):
                raise InvalidArgument("control bounds must be finite")
            if int(n) != n or n < 1:
                raise InvalidArgument("sample counts must be positive integers")
            if n == 1 and l != u:
                raise InvalidArgument("a single sample needs lower == upper")
            if n > 1 and not l < u:
                raise InvalidArgument(f"need lower < upper, got [{l}, {u}]")
        object.__setattr__(self, "lower", tuple(float(v) for v in lo))
        object.__setattr__(self, "upper", tuple(float(v) for v in hi))
        object.__setattr__(self, "samples", tuple(int(v) for v in ns))

    @classmethod
    def box(cls, lower, upper, samples=101):
        lower = np.atleast_1d(lower)
        upper = np.atleast_1d(upper)
        samples = np.broadcast_to(samples, lower.shape)
        return cls(tuple(lower), tuple(upper), tuple(samples))

    @classmethod
    def singleton(cls, value):
        value = tuple(np.atleast_1d(value).astype(float))
        return cls(value, value, (1,) * len(value))

    @property
    def dim(self) -> int:
        return len(self.lower)

    @cached_property
    def values(self) -> np.ndarray:
        """All enumerated controls, shape (K, m), lexicographic order."""
        return enumerate_controls(self)

    def __len__(self):
        return int(np.prod(self.samples))

    def contains(self, alpha, atol=1e-12) -> bool:
        alpha = np.asarray(alpha, dtype=float).reshape(-1, self.dim)
        return bool(np.all(alpha >= np.array(self.lower) - atol) and np.all(alpha <= np.array(self.upper) + atol))


def enumerate_controls(cs: ControlSet) -> np.ndarray:
    axes = [np.linspace(l, u, n) for l, u, n in zip(cs.lower, cs.upper, cs.samples)]
    pts = np.array(list(itertools.product(*axes)), dtype=float)
    pts.setflags(write=False)
    return pts


def argmax_indices(scores) -> np.ndarray:
    """Row index of the maximum in each column of a (K, n) score table.

    Ties go to the lowest index, i.e. the first control in enumeration order.
    """
    scores = np.asarray(scores, dtype=float)
    bad = np.isnan(scores)
    if bad.any():
        k, node = np.argwhere(bad)[0]
        raise NumericFailure("NaN score in control search", node=int(node), control_index=int(k))
    return np.argmax(scores, axis=0)


def argmax_per_node(objective, cs: ControlSet) -> np.ndarray:
    """Per-node maximiser over the enumerated controls of ``cs``.

    ``objective`` is either a (K, n) table of scores (row k belongs to control
    ``cs.values[k]``) or a callable taking one control vector and returning the
    n node scores. Returns the control field, shape (n, m).
    """
    controls = cs.values
    if callable(objective):
        scores = np.stack([np.asarray(objective(u), dtype=float) for u in controls])
    else:
        scores = np.asarray(objective, dtype=float)
        if scores.ndim == 1:
            scores = scores[:, None]
    if scores.shape[0] != len(controls):
        raise InvalidArgument(f"expected {len(controls)} score rows, got {scores.shape[0]}")
    return controls[argmax_indices(scores)]
