from typing import Callable, List, Optional, Tuple

import numpy as np

from app.core.logger import RunLog, create_log
from app.grid.hierarchy import GridHierarchy
from app.physics.assembly import Problem
from app.schemas.report import ConvergenceReport
from app.schemas.solver import SolverConfig, SolverMethod, TimeSchedule
from app.schemas.solver_event import EventStage, EventType
from app.solver.base import NonlinearSolver
from app.solver.baseline import BaselineSolver
from app.solver.direct import DirectSolver
from app.solver.multiscale import MultiscaleSolver

StepCallback = Callable[[int, np.ndarray, ConvergenceReport], None]


def make_solver(
    problem: Problem,
    config: SolverConfig,
    hierarchy: Optional[GridHierarchy] = None,
    run_log: Optional[RunLog] = None,
) -> NonlinearSolver:
    if config.method == SolverMethod.MULTISCALE:
        return MultiscaleSolver(problem, config, hierarchy=hierarchy, run_log=run_log)
    if config.method == SolverMethod.ILU_RICHARDSON:
        return BaselineSolver(problem, config, run_log=run_log)
    return DirectSolver(problem, config, run_log=run_log)


def march(
    solver: NonlinearSolver,
    schedule: TimeSchedule,
    p0: Optional[np.ndarray] = None,
    on_step: Optional[StepCallback] = None,
) -> List[Tuple[np.ndarray, ConvergenceReport]]:
    """Implicit Euler through the target times with one solver instance.

    Operators carry over between steps; the march stops at the first failed
    step.
    """
    n = solver.problem.n_cells
    p = np.zeros(n) if p0 is None else np.array(p0, dtype=np.float64, copy=True)
    results = []
    for index, (t_start, t_end) in enumerate(schedule.windows()):
        p, report = solver.step(p, t_start, t_end, step_key=index)
        results.append((p, report))
        create_log(
            EventStage.SCHEDULE,
            EventType.STEP,
            f"step {index + 1}/{len(schedule.times)} t*={t_start}..{t_end}",
            run_log=solver.run_log,
            outer=report.outer_iterations,
            inner=report.inner_iterations,
            norm=report.final_error,
        )
        if on_step is not None:
            on_step(index + 1, p, report)
        if not report.success:
            break
    return results


def run_schedule(
    problem: Problem,
    schedule: TimeSchedule,
    config: SolverConfig,
    p0: Optional[np.ndarray] = None,
    hierarchy: Optional[GridHierarchy] = None,
    run_log: Optional[RunLog] = None,
) -> List[Tuple[np.ndarray, ConvergenceReport]]:
    """Schedule from p* = 0 (or ``p0``) with a solver chosen by ``config.method``."""
    solver = make_solver(problem, config, hierarchy=hierarchy, run_log=run_log)
    return march(solver, schedule, p0)
