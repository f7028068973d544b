"""Benchmark problems: 1D and 2D Merton portfolio models and a cash-management
problem under stochastic volatility, with the L2 space-time error norms and the
table harness used to compare the fitted scheme against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .control import ControlSet
from .discretization import Discretization, ProblemSpec1D, ProblemSpec2D, Stencil, layout_1d
from .errors import InvalidArgument, NonConvergence, NumericFailure
from .fd_baseline import FiniteDifference1D, FiniteDifference2D
from .assembly_1d import FittedVolume1D
from .assembly_2d import FittedVolume2D
from .grid import Grid1D, Grid2D, make_uniform_grid_1d, make_uniform_grid_2d
from .sparse_linalg import MMatrixReport, check_m_matrix
from .stepper import ThetaConfig, march, theta_step

#: lower end of the Merton control box; keeps a = sigma^2 alpha^2 / 2 positive
ALPHA_MIN = 1e-6


@dataclass(frozen=True)
class Merton1DParams:
    r: float = 0.0449
    mu: float = 0.0657
    sigma: float = 0.2537
    p: float = 0.5255
    x_max: float = 10.0
    T: float = 1.0
    control_samples: int = 101

    def __post_init__(self):
        if not self.mu > self.r:
            raise InvalidArgument("need mu > r")
        if not 0 < self.p < 1:
            raise InvalidArgument("need 0 < p < 1")
        if not (self.sigma > 0 and self.x_max > 0 and self.T > 0):
            raise InvalidArgument("sigma, x_max and T must be positive")

    @property
    def optimal_control(self) -> float:
        """Unconstrained maximiser ``(mu - r) / (sigma^2 (1 - p))``."""
        return (self.mu - self.r) / (self.sigma**2 * (1 - self.p))

    @property
    def growth_rate(self) -> float:
        k = self.optimal_control
        return self.r + (self.mu - self.r) ** 2 / (self.sigma**2 * (1 - self.p)) + 0.5 * (self.p - 1) * self.sigma**2 * k**2


@dataclass(frozen=True)
class Merton2DParams:
    r1: float = 0.0449 / 2
    mu1: float = 0.0657 / 2
    r2: float = 0.044 / 2
    mu2: float = 0.065 / 2
    sigma: float = 0.2537 / 2
    p: float = 0.5255 / 2
    x_max: float = 1.0
    y_max: float = 1.0
    T: float = 1.0
    control_samples: int = 21

    def __post_init__(self):
        if not (self.mu1 > self.r1 and self.mu2 > self.r2):
            raise InvalidArgument("need mu1 > r1 and mu2 > r2")
        if not 0 < self.p < 0.5:
            raise InvalidArgument("need 0 < p < 1/2")
        if not (self.sigma > 0 and self.x_max > 0 and self.y_max > 0 and self.T > 0):
            raise InvalidArgument("sigma, domain sizes and T must be positive")

    def bracket(self, a1, a2):
        """Growth-rate expression maximised over the control box."""
        s2, p = self.sigma**2, self.p
        return (
            self.r1 + self.r2 + (self.mu1 - self.r1) * a1 + (self.mu2 - self.r2) * a2
            + 0.5 * s2 * a1**2 * (p - 1) + 0.5 * s2 * a2**2 * (p - 1) + s2 * a1 * a2 * p
        )

    @property
    def growth_rate(self) -> float:
        return merton2d_growth_rate(self)


@dataclass(frozen=True)
class CashMgmtParams:
    f: float = 0.12
    beta1: float = 0.96
    beta: float = 0.3
    alpha: float = -0.85
    r1: float = 0.024
    r2: float = 0.01
    rho: float = 0.5
    demand_mean: float = 0.0
    demand_var: float = 0.2
    R_max: float = 0.5
    sigma_max: float = 0.5
    T: float = 10.0
    seed: int = 0
    control_samples: int = 11

    def __post_init__(self):
        if not (self.beta > 0 and self.sigma_max > 0 and self.R_max > 0 and self.T > 0):
            raise InvalidArgument("beta, sigma_max, R_max and T must be positive")
        if abs(self.rho) > 1:
            raise InvalidArgument("correlation must lie in [-1, 1]")
        if self.demand_var < 0:
            raise InvalidArgument("demand variance must be nonnegative")


# -- closed forms -------------------------------------------------------------


def merton1d_exact(params: Merton1DParams, tau, x):
    """``exp(p rho tau) x^p / p``; equals the terminal utility at ``tau = 0``."""
    x = np.asarray(x, dtype=float)
    p = params.p
    return np.exp(p * params.growth_rate * np.asarray(tau, dtype=float)) * np.power(x, p) / p


def _box_max_quadratic(params: Merton2DParams):
    """Exact maximiser of the (concave for p < 1/2) bracket over [0, 1]^2."""
    s2, p = params.sigma**2, params.p
    H = s2 * np.array([[p - 1, p], [p, p - 1]])
    g = np.array([params.mu1 - params.r1, params.mu2 - params.r2])
    cands = [np.linalg.solve(H, -g)]
    for axis in (0, 1):
        other = 1 - axis
        for fixed in (0.0, 1.0):
            # maximise along the edge where the other coordinate is fixed
            t = -(g[axis] + H[axis, other] * fixed) / H[axis, axis]
            for val in (t, 0.0, 1.0):
                pt = np.empty(2)
                pt[axis], pt[other] = val, fixed
                cands.append(pt)
    cands = [c for c in cands if np.all(c >= 0) and np.all(c <= 1)]
    vals = [params.bracket(*c) for c in cands]
    k = int(np.argmax(vals))
    return float(vals[k]), cands[k]


@lru_cache(maxsize=32)
def merton2d_growth_rate(params: Merton2DParams, samples: int = 1001) -> float:
    """Supremum of the bracket by dense grid search, cross-checked against the
    exact box maximum of the concave quadratic."""
    t = np.linspace(0.0, 1.0, samples)
    a1, a2 = np.meshgrid(t, t, indexing="ij")
    vals = params.bracket(a1, a2)
    best = float(vals.max())
    exact, _ = _box_max_quadratic(params)
    # a quadratic with bounded derivatives loses at most O(step) on the grid
    step = 1.0 / (samples - 1)
    slack = step * (abs(params.mu1 - params.r1) + abs(params.mu2 - params.r2) + 3 * params.sigma**2)
    if not (best <= exact + 1e-14 and exact - best <= slack):
        raise NumericFailure("grid-search growth rate disagrees with the quadratic maximum", grid=best, exact=exact)
    return best


def merton2d_ansatz(params: Merton2DParams, tau, x, y):
    p = params.p
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.exp(p * params.growth_rate * np.asarray(tau, dtype=float)) * (np.power(x, p) / p) * (np.power(y, p) / p)


# -- problem builders ---------------------------------------------------------


def _merton1d_problem(pr: Merton1DParams) -> ProblemSpec1D:
    s2 = pr.sigma**2

    def a(x, tau, al):
        return 0.5 * s2 * al[..., 0] ** 2

    def b(x, tau, al):
        u = al[..., 0]
        return pr.r + (pr.mu - pr.r) * u - s2 * u**2

    def c(x, tau, al):
        u = al[..., 0]
        return -(pr.r + u * (pr.mu - pr.r) - s2 * u**2)

    return ProblemSpec1D(
        a, b, c,
        controls=ControlSet.box(ALPHA_MIN, 1.0, pr.control_samples),
        boundary=lambda tau, x: merton1d_exact(pr, tau, x),
        terminal=lambda x: merton1d_exact(pr, 0.0, x),
        horizon=pr.T,
        time_dependent=False,
        name="merton1d",
    )


def _merton2d_problem(pr: Merton2DParams) -> ProblemSpec2D:
    s2 = pr.sigma**2

    def a(x, y, tau, al):
        return 0.5 * s2 * al[..., 0] ** 2

    def abar(x, y, tau, al):
        return 0.5 * s2 * al[..., 1] ** 2

    def b1(x, y, tau, al):
        u, w = al[..., 0], al[..., 1]
        return pr.r1 + u * (pr.mu1 - pr.r1) - 0.5 * s2 * u * w - s2 * u**2

    def b2(x, y, tau, al):
        u, w = al[..., 0], al[..., 1]
        return pr.r2 + w * (pr.mu2 - pr.r2) - 0.5 * s2 * u * w - s2 * w**2

    def c(x, y, tau, al):
        u, w = al[..., 0], al[..., 1]
        return -(pr.r1 + (pr.mu1 - pr.r1) * u) - (pr.r2 + (pr.mu2 - pr.r2) * w) + s2 * (u**2 + w**2 + u * w)

    def d1(x, y, tau, al):
        return 0.5 * s2 * al[..., 0] * al[..., 1]

    return ProblemSpec2D(
        a, abar, b1, b2, d1, c,
        controls=ControlSet.box([ALPHA_MIN] * 2, [1.0, 1.0], pr.control_samples),
        boundary=lambda tau, x, y: merton2d_ansatz(pr, tau, x, y),
        terminal=lambda x, y: merton2d_ansatz(pr, 0.0, x, y),
        horizon=pr.T,
        time_dependent=False,
        name="merton2d",
    )


def _cash_terminal(R, sig):
    return np.where(np.asarray(R) > 0, 1.0, 0.0) * np.ones_like(np.asarray(sig, dtype=float))


def _cash_problem(pr: CashMgmtParams, demand: float = 0.0, edge=None) -> ProblemSpec2D:
    """Value-rate problem in (x, y) = (R, sigma) with a fixed demand draw.

    ``edge(tau, R)`` supplies the values on ``sigma = 0``; by default the
    terminal data is used there.
    """
    half_rb = 0.5 * pr.rho * pr.beta

    def a(x, y, tau, u):
        return y**2 / (2 * x**2)

    def abar(x, y, tau, u):
        return 0.5 * pr.beta**2 + 0 * x

    def b1(x, y, tau, u):
        return pr.f / x + pr.beta1 - half_rb / x + 0 * y

    def b2(x, y, tau, u):
        return pr.alpha - pr.beta**2 + 0 * x

    def d1(x, y, tau, u):
        return half_rb / x + 0 * y

    def c(x, y, tau, u):
        u = u[..., 0]
        return u * pr.r2 + (1 - u) * pr.r1 + u * x - demand - pr.beta1 - pr.alpha + pr.beta**2

    edge = edge if edge is not None else (lambda tau, R: _cash_terminal(R, 0.0))

    def boundary(tau, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = np.where(y >= pr.sigma_max, x, 0.0)
        low = (y <= 0) & (x > 0)
        if low.any():
            out = out.copy()
            out[low] = edge(tau, x[low])
        return np.where(x <= 0, 0.0, out)

    return ProblemSpec2D(
        a, abar, b1, b2, d1, c,
        controls=ControlSet.box(0.0, 1.0, pr.control_samples),
        boundary=boundary,
        terminal=_cash_terminal,
        horizon=pr.T,
        time_dependent=False,
        neumann_x_max=1.0,
        name="cash",
    )


def build_problem(params, **kwargs):
    """Problem definition for one of the three parameter types.

    For :class:`CashMgmtParams`, ``demand`` (the per-step draw) and ``edge``
    (values on ``sigma = 0``) may be passed.
    """
    if isinstance(params, Merton1DParams):
        return _merton1d_problem(params)
    if isinstance(params, Merton2DParams):
        return _merton2d_problem(params)
    if isinstance(params, CashMgmtParams):
        return _cash_problem(params, **kwargs)
    raise InvalidArgument(f"unknown parameter type {type(params).__name__}")


# -- value surfaces and error norms ------------------------------------------


@dataclass
class ValueSurface:
    """Full-grid values ``values[n]`` (boundary nodes included) at ``times[n]``
    together with the interior control field chosen on each step."""

    grid: Grid1D | Grid2D
    times: np.ndarray
    values: np.ndarray
    controls: list = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[0] != len(self.times):
            raise InvalidArgument("one value array per time level is required")
        if not np.all(np.isfinite(self.values)):
            raise NumericFailure("value surface has non-finite entries")

    @property
    def is_2d(self) -> bool:
        return isinstance(self.grid, Grid2D)

    def at(self, n: int) -> np.ndarray:
        """Values at time level n, reshaped to the grid."""
        v = self.values[n]
        return v.reshape(self.grid.shape) if self.is_2d else v

    def interior(self, n: int) -> np.ndarray:
        v = self.at(n)
        return v[1:-1, 1:-1] if self.is_2d else v[1:-1]

    @classmethod
    def from_trajectory(cls, disc: Discretization, grid, traj):
        full = [disc.extend(v, t) for v, t in zip(traj.values, traj.times)]
        return cls(grid, np.asarray(traj.times), np.array(full), list(traj.controls))


def _interior_stack(numeric, n_expected: int, m: int):
    if isinstance(numeric, ValueSurface):
        rows = [numeric.interior(n).ravel() for n in range(len(numeric.times))]
    else:
        rows = [np.asarray(r, dtype=float).ravel() for r in numeric]
    if len(rows) < m or any(r.size != n_expected for r in rows[:m]):
        raise InvalidArgument(f"need at least {m} time levels of {n_expected} interior values")
    return np.array(rows[:m])


def _steps_from(numeric, m):
    if m is not None:
        return int(m)
    n_levels = len(numeric.times) if isinstance(numeric, ValueSurface) else len(numeric)
    return n_levels - 1


def l2_spacetime_error_1d(numeric, exact, grid: Grid1D, dt: float, m: int | None = None) -> float:
    """``sqrt(sum_{n<m} sum_i dt * l_i * (v_i^n - v(tau_n, x_i))^2)``.

    ``numeric`` is a :class:`ValueSurface` or a sequence of interior value
    arrays, one per time level ``0..m`` (the last level is not summed).
    """
    m = _steps_from(numeric, m)
    V = _interior_stack(numeric, grid.n_interior, m)
    x = grid.nodes[1:-1]
    tau = dt * np.arange(m)
    E = np.array([np.broadcast_to(exact(t, x), x.shape) for t in tau])
    return float(np.sqrt(np.sum(dt * grid.cell_lengths[1:-1] * (V - E) ** 2)))


def l2_spacetime_error_2d(numeric, exact, grid: Grid2D, dt: float, m: int | None = None) -> float:
    """2D analogue with weights ``dt * hx_i * hy_j``."""
    m = _steps_from(numeric, m)
    V = _interior_stack(numeric, grid.n_interior, m)
    X, Y = grid.mesh()
    X, Y = X[1:-1, 1:-1].ravel(), Y[1:-1, 1:-1].ravel()
    w = grid.cell_areas[1:-1, 1:-1].ravel()
    tau = dt * np.arange(m)
    E = np.array([np.broadcast_to(exact(t, X, Y), X.shape) for t in tau])
    return float(np.sqrt(np.sum(dt * w * (V - E) ** 2)))


# -- Merton runs and the error table -----------------------------------------

METHODS = {"fitted": (FittedVolume1D, FittedVolume2D), "fd": (FiniteDifference1D, FiniteDifference2D)}


@dataclass
class BenchmarkRun:
    method: str
    n_steps: int
    surface: ValueSurface
    error: float | None
    iterations: list
    m_matrix: list

    @property
    def m_matrix_ok(self) -> bool:
        return all(r is None or r.verdict for r in self.m_matrix)


def default_grid(params, n1: int | None = None, n2: int | None = None):
    if isinstance(params, Merton1DParams):
        return make_uniform_grid_1d(params.x_max, n1 or 1500)
    if isinstance(params, Merton2DParams):
        return make_uniform_grid_2d(params.x_max, params.y_max, n1 or 50, n2 or 45)
    if isinstance(params, CashMgmtParams):
        return make_uniform_grid_2d(params.R_max, params.sigma_max, n1 or 10, n2 or 10)
    raise InvalidArgument(f"unknown parameter type {type(params).__name__}")


def run_merton(params, method: str, n_steps: int, grid=None, theta: float = 1.0, tol: float = 1e-8,
               max_iter: int = 100, check_matrices: bool = True) -> BenchmarkRun:
    """Solve a Merton benchmark with the fitted or finite-difference scheme and
    measure the L2 space-time error against the closed form."""
    if method not in METHODS:
        raise InvalidArgument(f"method must be one of {sorted(METHODS)}")
    one_d = isinstance(params, Merton1DParams)
    if not one_d and not isinstance(params, Merton2DParams):
        raise InvalidArgument("run_merton needs Merton1DParams or Merton2DParams")
    grid = grid if grid is not None else default_grid(params)
    spec = build_problem(params)
    disc = METHODS[method][0 if one_d else 1](spec, grid)
    cfg = ThetaConfig(params.T, n_steps, theta=theta, tol=tol, max_iter=max_iter)
    if one_d:
        v0 = spec.terminal(grid.nodes[1:-1])
    else:
        X, Y = grid.mesh()
        v0 = spec.terminal(X[1:-1, 1:-1], Y[1:-1, 1:-1]).ravel()
    traj = march(disc, v0, cfg, check_matrices=check_matrices)
    surface = ValueSurface.from_trajectory(disc, grid, traj)
    if one_d:
        err = l2_spacetime_error_1d(surface, lambda t, x: merton1d_exact(params, t, x), grid, cfg.dt)
    else:
        err = l2_spacetime_error_2d(surface, lambda t, x, y: merton2d_ansatz(params, t, x, y), grid, cfg.dt)
    return BenchmarkRun(method, n_steps, surface, err, traj.iterations, traj.m_matrix)


@dataclass
class ErrorTable:
    """L2 space-time errors keyed by method and number of time steps."""

    m_list: tuple
    rows: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.m_list) == 0:
            raise InvalidArgument("need at least one time subdivision")

    def add(self, method: str, m: int, error: float):
        if not np.isfinite(error):
            raise NumericFailure("non-finite error cell", method=method, m=m)
        self.rows.setdefault(method, {})[int(m)] = float(error)

    def __getitem__(self, key):
        method, m = key
        return self.rows[method][m]

    @property
    def methods(self) -> list:
        return list(self.rows)

    def records(self):
        """``(method, m, error)`` triples in insertion order."""
        return [(meth, m, self.rows[meth][m]) for meth in self.rows for m in self.m_list if m in self.rows[meth]]


def error_table(params, methods=("fitted", "fd"), m_list=(200, 150, 100, 50), grid=None, **kw) -> tuple:
    """Fill an :class:`ErrorTable`; returns it with the individual runs."""
    table = ErrorTable(tuple(int(m) for m in m_list))
    runs = []
    for method in methods:
        for m in table.m_list:
            run = run_merton(params, method, m, grid=grid, **kw)
            table.add(method, m, run.error)
            runs.append(run)
    return table, runs


# -- cash management ----------------------------------------------------------


def sample_demand(params: CashMgmtParams, step: int, rng: np.random.Generator) -> float:
    """One draw of the demand rate for time step ``step``; the caller holds it
    fixed for the whole step."""
    return float(rng.normal(params.demand_mean, np.sqrt(params.demand_var)))


def demand_path(params: CashMgmtParams, n_steps: int, seed: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(params.seed if seed is None else seed)
    return np.array([sample_demand(params, n, rng) for n in range(n_steps)])


class UpwindEdge(Discretization):
    """First-order upwind scheme for ``v_tau = s(x) v_x + c(x, u) v`` on the
    ``sigma = 0`` edge, with ``v(0) = 0`` and ``v_x(x_max) = 1``."""

    def __init__(self, params: CashMgmtParams, grid: Grid1D, demand: float):
        super().__init__(layout_1d(grid, neumann_right=1.0), ControlSet.box(0.0, 1.0, params.control_samples), False)
        self.params = params
        self.grid = grid
        self.demand = demand
        x = grid.nodes
        i = np.arange(1, grid.n_cells)
        self._x = x[i]
        self._cols = np.stack([i, i - 1, i + 1], axis=1)
        self._speed = params.f + params.beta1 * x[i]
        self._hm = x[i] - x[i - 1]
        self._hp = x[i + 1] - x[i]

    def stencil(self, alpha, tau) -> Stencil:
        pr, u = self.params, alpha[:, 0]
        c = u * pr.r2 + (1 - u) * pr.r1 + u * self._x - self.demand
        fwd = np.maximum(self._speed, 0) / self._hp
        bwd = np.maximum(-self._speed, 0) / self._hm
        coef = np.stack([fwd + bwd - c, -bwd, -fwd], axis=1)
        return Stencil(coef, self._cols)

    def dirichlet_values(self, tau):
        return np.zeros(self.layout.dirichlet.size)


def _step(disc, v, t0, t1, cfg, step, where):
    try:
        return theta_step(disc, v, t0, t1, cfg)
    except NonConvergence as exc:
        raise NonConvergence(f"policy iteration did not converge on the {where} solve", exc.gap, exc.iterations,
                             step=step) from exc


@dataclass
class CashSolution:
    surface: ValueSurface
    edge: np.ndarray
    demand: np.ndarray
    iterations: list
    edge_iterations: list
    m_matrix: list


def solve_cash(params: CashMgmtParams, n_steps: int = 100, n1: int = 10, n2: int = 10, theta: float = 1.0,
               tol: float = 1e-8, max_iter: int = 100, seed: int | None = None, check_matrices: bool = True,
               method: str = "fitted") -> CashSolution:
    """March the value-rate problem from the terminal data over ``n_steps``.

    Each step first advances the ``sigma = 0`` edge equation, then uses the new
    edge values as Dirichlet data for the 2D step. The demand is drawn once per
    step from a generator seeded by ``seed`` (default ``params.seed``).
    ``method`` picks the 2D scheme (``fitted`` or ``fd``).
    """
    if method not in METHODS:
        raise InvalidArgument(f"method must be one of {sorted(METHODS)}")
    scheme = METHODS[method][1]
    grid = default_grid(params, n1, n2)
    cfg = ThetaConfig(params.T, n_steps, theta=theta, tol=tol, max_iter=max_iter)
    times = cfg.times
    demand = demand_path(params, n_steps, seed)
    xg = grid.x
    R = xg.nodes

    edge_full = [_cash_terminal(R, 0.0) * 1.0]
    X, Y = grid.mesh()
    v = _cash_terminal(X[1:-1, 1:-1], Y[1:-1, 1:-1]).ravel()
    values, controls, iters, edge_iters, reports = [], [None], [], [], []
    for n in range(n_steps):
        d = demand[n]
        edge_disc = UpwindEdge(params, xg, d)
        e_res = _step(edge_disc, edge_full[-1][1:-1], times[n], times[n + 1], cfg, n + 1, "sigma=0 edge")
        edge_full.append(edge_disc.extend(e_res.v, times[n + 1]))
        edge_iters.append(e_res.iterations)

        levels = {times[n]: edge_full[n], times[n + 1]: edge_full[n + 1]}

        def edge(tau, r, levels=levels):
            key = min(levels, key=lambda t: abs(t - tau))
            return np.interp(r, R, levels[key])

        disc = scheme(build_problem(params, demand=d, edge=edge), grid)
        if n == 0:
            values.append(disc.extend(v, times[0]))
        res = _step(disc, v, times[n], times[n + 1], cfg, n + 1, "interior")
        v = res.v
        values.append(disc.extend(v, times[n + 1]))
        controls.append(res.alpha)
        iters.append(res.iterations)
        reports.append(check_m_matrix(res.step_matrix) if check_matrices else None)
    surface = ValueSurface(grid, times, np.array(values), controls)
    return CashSolution(surface, np.array(edge_full), demand, iters, edge_iters, reports)


# -- randomised problems for the M-matrix suite -------------------------------


def random_problem_1d(rng: np.random.Generator):
    """Constant-coefficient problem with ``a > 0`` and ``c < 0`` on a random
    uniform mesh with ``h <= domain / 100``. Returns ``(spec, grid)``."""
    a = rng.uniform(0.01, 1.0)
    b = rng.uniform(-1.0, 1.0)
    c = rng.uniform(-1.0, -0.01)
    x_max = rng.uniform(1.0, 10.0)
    n = int(rng.integers(100, 401))
    spec = ProblemSpec1D(
        lambda x, t, al: a + 0 * x, lambda x, t, al: b + 0 * x, lambda x, t, al: c + 0 * x,
        controls=ControlSet.singleton(0.0),
        boundary=lambda t, x: np.ones_like(x),
        terminal=lambda x: np.ones_like(x),
        horizon=1.0,
        time_dependent=False,
        name="random1d",
    )
    return spec, make_uniform_grid_1d(x_max, n)


def random_problem_2d(rng: np.random.Generator):
    """2D analogue with ``a, abar > 0``, ``d1 > 0``, ``c < 0``."""
    a, abar = rng.uniform(0.01, 1.0, 2)
    b1, b2 = rng.uniform(-1.0, 1.0, 2)
    d1 = rng.uniform(0.01, 0.5)
    c = rng.uniform(-1.0, -0.01)
    x_max, y_max = rng.uniform(1.0, 5.0, 2)
    n1, n2 = (int(k) for k in rng.integers(100, 131, 2))
    k = lambda v: (lambda x, y, t, al: v + 0 * x + 0 * y)  # noqa: E731
    spec = ProblemSpec2D(
        k(a), k(abar), k(b1), k(b2), k(d1), k(c),
        controls=ControlSet.singleton(0.0),
        boundary=lambda t, x, y: np.ones_like(x),
        terminal=lambda x, y: np.ones_like(x),
        horizon=1.0,
        time_dependent=False,
        name="random2d",
    )
    return spec, make_uniform_grid_2d(x_max, y_max, n1, n2)
