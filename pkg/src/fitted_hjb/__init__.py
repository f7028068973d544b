"""Fitted finite-volume solvers for degenerate HJB equations."""

from .benchmarks import (
    CashMgmtParams,
    ErrorTable,
    Merton1DParams,
    Merton2DParams,
    ValueSurface,
    build_problem,
    demand_path,
    error_table,
    l2_spacetime_error_1d,
    l2_spacetime_error_2d,
    merton1d_exact,
    merton2d_ansatz,
    run_merton,
    sample_demand,
    solve_cash,
)
from .control import ControlSet, argmax_per_node, enumerate_controls
from .discretization import AssembledSystem, ProblemSpec1D, ProblemSpec2D
from .errors import DomainError, InvalidArgument, NonConvergence, NumericFailure, SolverFailure
from .fd_baseline import FiniteDifference1D, FiniteDifference2D, assemble_fd_1d, assemble_fd_2d
from .assembly_1d import FittedVolume1D, assemble_1d, fitted_flux_degenerate, fitted_flux_interior
from .assembly_2d import FittedVolume2D, assemble_2d, flux_degenerate_x, flux_east_2d
from .grid import Grid1D, Grid2D, make_uniform_grid_1d, make_uniform_grid_2d
from .sparse_linalg import MMatrixReport, check_m_matrix, solve_linear
from .stepper import SolveTrajectory, ThetaConfig, march, theta_step

__all__ = [name for name in dir() if not name.startswith("_")]
