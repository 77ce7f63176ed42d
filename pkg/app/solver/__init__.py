from .monitor import convergence_monitor
from .base import NonlinearSolver, inner_residuals
from .multiscale import MultiscaleSolver, cams_step
from .baseline import BaselineSolver, baseline_solve
from .direct import DirectSolver, direct_solve
from .schedule import make_solver, march, run_schedule

__all__ = [
    "convergence_monitor",
    "NonlinearSolver",
    "inner_residuals",
    "MultiscaleSolver",
    "cams_step",
    "BaselineSolver",
    "baseline_solve",
    "DirectSolver",
    "direct_solve",
    "make_solver",
    "march",
    "run_schedule",
]
