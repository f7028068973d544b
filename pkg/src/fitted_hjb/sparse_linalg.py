"""Sparse matrix utilities: M-matrix verification and the per-step linear solve.

Matrices are ``scipy.sparse.csr_matrix`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InvalidArgument, SolverFailure

#: relative slack allowed when testing diagonal dominance
DOMINANCE_RTOL = 1e-12


def as_sparse(M) -> sp.csr_matrix:
    M = sp.csr_matrix(M, dtype=float)
    M.sum_duplicates()
    M.sort_indices()
    return M


@dataclass
class MMatrixReport:
    """Outcome of :func:`check_m_matrix`.

    ``witnesses`` lists ``(row, col, reason)`` triples for every violation found
    (col equals row for diagonal and dominance failures).
    """

    positive_diagonal: bool
    nonpositive_offdiagonal: bool
    diagonally_dominant: bool
    strict_rows: int
    witnesses: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return self.positive_diagonal and self.nonpositive_offdiagonal and self.diagonally_dominant

    def __bool__(self):
        return self.verdict

    def summary(self) -> str:
        flags = (
            f"diag>0={self.positive_diagonal} offdiag<=0={self.nonpositive_offdiagonal} "
            f"row-dominant={self.diagonally_dominant} strict-rows={self.strict_rows}"
        )
        return f"M-matrix={self.verdict} ({flags}; {len(self.witnesses)} violations)"


def check_m_matrix(M, max_witnesses: int = 20) -> MMatrixReport:
    """Sufficient M-matrix test: positive diagonal, non-positive off-diagonal,
    weak row diagonal dominance with at least one strictly dominant row.

    Weak dominance plus one strict row certifies a nonsingular M-matrix when
    the matrix is irreducible, which holds for every connected stencil here.
    """
    M = as_sparse(M)
    if M.shape[0] != M.shape[1]:
        raise InvalidArgument("M-matrix check needs a square matrix")
    coo = M.tocoo()
    off = coo.row != coo.col
    diag = M.diagonal()
    witnesses = []

    bad_diag = np.flatnonzero(~(diag > 0))
    witnesses += [(int(r), int(r), "diagonal<=0") for r in bad_diag[:max_witnesses]]

    pos = off & (coo.data > 0)
    witnesses += [(int(r), int(c), "offdiagonal>0") for r, c in zip(coo.row[pos][:max_witnesses], coo.col[pos][:max_witnesses])]

    abs_off = np.bincount(coo.row[off], weights=np.abs(coo.data[off]), minlength=M.shape[0])
    margin = np.abs(diag) - abs_off
    scale = np.abs(diag) + abs_off
    tol = DOMINANCE_RTOL * np.maximum(scale, np.finfo(float).tiny)
    weak_fail = np.flatnonzero(margin < -tol)
    witnesses += [(int(r), int(r), "not dominant") for r in weak_fail[:max_witnesses]]
    strict = int(np.count_nonzero(margin > tol))

    return MMatrixReport(
        positive_diagonal=bad_diag.size == 0,
        nonpositive_offdiagonal=not pos.any(),
        diagonally_dominant=weak_fail.size == 0 and strict > 0,
        strict_rows=strict,
        witnesses=witnesses,
    )


def bandwidth(M) -> int:
    coo = as_sparse(M).tocoo()
    if coo.nnz == 0:
        return 0
    return int(np.max(np.abs(coo.row - coo.col)))


def _residual(M, x, rhs):
    return float(np.max(np.abs(M @ x - rhs))) if rhs.size else 0.0


def solve_linear(M, rhs, method: str = "auto", rtol: float = 1e-10) -> np.ndarray:
    """Solve ``M x = rhs`` and verify ``|M x - rhs|_inf <= rtol (1 + |rhs|_inf)``.

    ``method``: ``"banded"`` (tridiagonal elimination), ``"iterative"``
    (ILU-preconditioned BiCGSTAB, falling back to a direct sparse solve),
    ``"direct"``, or ``"auto"`` (banded when the bandwidth is one).
    """
    M = as_sparse(M)
    rhs = np.asarray(rhs, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n) or rhs.shape != (n,):
        raise InvalidArgument(f"shape mismatch: M {M.shape}, rhs {rhs.shape}")
    target = rtol * (1.0 + (np.max(np.abs(rhs)) if n else 0.0))
    if method == "auto":
        method = "banded" if bandwidth(M) <= 1 else "iterative"

    if method == "banded":
        if bandwidth(M) > 1:
            raise InvalidArgument("banded solve needs a tridiagonal matrix")
        ab = np.zeros((3, n))
        ab[0, 1:] = M.diagonal(1)
        ab[1] = M.diagonal()
        ab[2, :-1] = M.diagonal(-1)
        try:
            x = scipy.linalg.solve_banded((1, 1), ab, rhs, check_finite=True)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SolverFailure(f"banded elimination failed: {exc}") from exc
    elif method == "iterative":
        x = _iterative(M, rhs, target)
        if x is None or _residual(M, x, rhs) > target:
            x = _direct(M, rhs)
    elif method == "direct":
        x = _direct(M, rhs)
    else:
        raise InvalidArgument(f"unknown method {method!r}")

    res = _residual(M, x, rhs) if np.all(np.isfinite(x)) else float("inf")
    if not res <= target:
        raise SolverFailure("linear solve missed its residual target", residual=res)
    return x


def _iterative(M, rhs, target):
    try:
        ilu = spla.spilu(M.tocsc(), drop_tol=1e-8, fill_factor=20)
    except RuntimeError:
        return None
    pre = spla.LinearOperator(M.shape, ilu.solve)
    x, info = spla.bicgstab(M, rhs, M=pre, rtol=0.0, atol=0.1 * target, maxiter=200)
    return x if info == 0 else None


def _direct(M, rhs):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            return spla.spsolve(M.tocsc(), rhs)
        except (spla.MatrixRankWarning, RuntimeError) as exc:
            raise SolverFailure(f"direct sparse solve failed: {exc}") from exc
