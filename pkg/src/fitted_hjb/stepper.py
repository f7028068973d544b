"""Theta-method time marching with per-step policy iteration.

In time-to-go ``tau`` the semi-discrete problem reads
``v_tau = sup_alpha [A(tau, alpha) v + G(tau, alpha)]``. One step from
``tau_n`` to ``tau_{n+1}`` alternates a node-wise argmax of

    theta dt [A^{n+1}(alpha) w + G^{n+1}(alpha)]_i + (1-theta) dt [A^n(alpha) v^n + G^n(alpha)]_i

with the linear solve

    [I - theta dt A^{n+1}(alpha)] w' = [I + (1-theta) dt A^n(alpha)] v^n
                                      + theta dt G^{n+1}(alpha) + (1-theta) dt G^n(alpha)

until successive iterates ``w`` agree to within ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .control import ControlSet, argmax_indices
from .discretization import AssembledSystem
from .errors import InvalidArgument, NonConvergence
from .sparse_linalg import MMatrixReport, check_m_matrix, solve_linear


@dataclass(frozen=True)
class ThetaConfig:
    horizon: float
    n_steps: int
    theta: float = 1.0
    tol: float = 1e-8
    max_iter: int = 100
    norm: float = np.inf
    solver: str = "auto"

    def __post_init__(self):
        if not 0.5 <= self.theta <= 1.0:
            raise InvalidArgument(f"theta must lie in [1/2, 1], got {self.theta}")
        if not self.horizon > 0 or int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise InvalidArgument("need horizon > 0 and an integer n_steps >= 1")
        if not self.tol > 0 or self.max_iter < 1:
            raise InvalidArgument("need tol > 0 and max_iter >= 1")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.n_steps + 1)


@dataclass
class StepResult:
    v: np.ndarray
    alpha: np.ndarray
    iterations: int
    gaps: list
    system: AssembledSystem
    step_matrix: sp.csr_matrix


@dataclass
class SolveTrajectory:
    """Values, controls and diagnostics at every time level.

    ``values[n]`` is ``v^n`` on the unknowns; ``controls[n]`` the control
    field chosen on step n (``controls[0]`` is None).
    """

    times: np.ndarray
    values: list
    controls: list
    iterations: list = field(default_factory=list)
    m_matrix: list = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.values) - 1


def _scores(assembler, controls: ControlSet, v, tau):
    fast = getattr(assembler, "scores", None)
    if fast is not None:
        return fast(v, tau)
    n = v.size
    out = np.empty((len(controls), n))
    for k, u in enumerate(controls.values):
        sys = assembler(np.broadcast_to(u, (n, controls.dim)), tau)
        out[k] = sys.G + sys.A @ v
    return out


def _controls_of(assembler, controls):
    controls = controls if controls is not None else getattr(assembler, "controls", None)
    if controls is None:
        raise InvalidArgument("no control set given and the assembler carries none")
    return controls


def theta_step(
    assembler: Callable[[np.ndarray, float], AssembledSystem],
    v_n,
    tau_n: float,
    tau_np1: float,
    cfg: ThetaConfig,
    controls: ControlSet | None = None,
) -> StepResult:
    """Advance one step with policy iteration.

    ``assembler(alpha, tau)`` returns the :class:`AssembledSystem` for a control
    field. If it also has ``scores(v, tau)`` (the (K, n) table of
    ``[A(u_k) v + G(u_k)]``) that is used for the argmax; otherwise the table
    is built from one assembly per enumerated control.

    The loop stops when ``|w^{k+1} - w^k| <= tol`` or when the argmax returns
    the control field it returned on the previous pass (the next solve would
    repeat the last one exactly).
    """
    controls = _controls_of(assembler, controls)
    theta, dt = cfg.theta, tau_np1 - tau_n
    v_n = np.asarray(v_n, dtype=float)
    n = v_n.size
    values = controls.values
    eye = sp.identity(n, format="csr")

    explicit_scores = 0.0
    if theta < 1.0:
        explicit_scores = (1 - theta) * dt * _scores(assembler, controls, v_n, tau_n)

    w = v_n
    prev_idx = None
    gaps = []
    for k in range(1, cfg.max_iter + 1):
        total = theta * dt * _scores(assembler, controls, w, tau_np1) + explicit_scores
        idx = argmax_indices(total)
        if prev_idx is not None and np.array_equal(idx, prev_idx):
            return StepResult(w, alpha, k - 1, gaps, sys_new, lhs)
        alpha = values[idx]
        sys_new = assembler(alpha, tau_np1)
        lhs = (eye - theta * dt * sys_new.A).tocsr()
        rhs = v_n + theta * dt * sys_new.G
        if theta < 1.0:
            sys_old = assembler(alpha, tau_n)
            rhs = rhs + (1 - theta) * dt * (sys_old.A @ v_n + sys_old.G)
        w_new = solve_linear(lhs, rhs, method=cfg.solver)
        gap = float(np.linalg.norm(w_new - w, ord=cfg.norm)) if n else 0.0
        gaps.append(gap)
        w, prev_idx = w_new, idx
        if gap <= cfg.tol:
            return StepResult(w, alpha, k, gaps, sys_new, lhs)
    raise NonConvergence("policy iteration did not converge", gap=gaps[-1], iterations=cfg.max_iter)


def march(
    assembler,
    v0,
    cfg: ThetaConfig,
    controls: ControlSet | None = None,
    check_matrices: bool = True,
    on_step: Callable[[int, StepResult], None] | None = None,
) -> SolveTrajectory:
    """Apply :func:`theta_step` ``cfg.n_steps`` times from ``tau = 0``."""
    times = cfg.times
    traj = SolveTrajectory(times, [np.asarray(v0, dtype=float).copy()], [None])
    v = traj.values[0]
    for n in range(cfg.n_steps):
        try:
            res = theta_step(assembler, v, times[n], times[n + 1], cfg, controls)
        except NonConvergence as exc:
            raise NonConvergence("policy iteration did not converge", exc.gap, exc.iterations, step=n + 1) from exc
        v = res.v
        traj.values.append(v)
        traj.controls.append(res.alpha)
        traj.iterations.append(res.iterations)
        traj.m_matrix.append(check_m_matrix(res.step_matrix) if check_matrices else None)
        if on_step is not None:
            on_step(n + 1, res)
    return traj
