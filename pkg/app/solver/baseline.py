from typing import Hashable, Optional, Tuple

import numpy as np

from app.core.logger import RunLog
from app.core.timing import StageTimer
from app.linalg.ilu import Ilu0Factors, ilu0_factor
from app.physics.assembly import LinearSystem, Problem
from app.schemas.report import ConvergenceReport
from app.schemas.solver import SolverConfig, SolverMethod
from app.solver.base import NonlinearSolver


class BaselineSolver(NonlinearSolver):
    """Same outer strategy; the linear stage is Richardson preconditioned by ILU(0)."""

    method = SolverMethod.ILU_RICHARDSON

    def __init__(self, problem: Problem, config: SolverConfig, run_log: Optional[RunLog] = None):
        super().__init__(problem, config, run_log)
        self.ilu: Optional[Ilu0Factors] = None

    def prepare(self, system: LinearSystem, step_key: Hashable, timer: StageTimer) -> None:
        self._stage = "smoothing"
        with timer.stage("smoothing"):
            self.ilu = ilu0_factor(system.A)

    def inner_iteration(
        self, system: LinearSystem, p: np.ndarray, r: np.ndarray, timer: StageTimer
    ) -> Tuple[np.ndarray, Optional[float]]:
        self._stage = "smoothing"
        with timer.stage("smoothing"):
            return p + self.ilu.solve(r), None


def baseline_solve(
    problem: Problem,
    p_n: np.ndarray,
    t_start: float,
    t_end: float,
    config: Optional[SolverConfig] = None,
    run_log: Optional[RunLog] = None,
) -> Tuple[np.ndarray, ConvergenceReport]:
    solver = BaselineSolver(problem, config or SolverConfig(method=SolverMethod.ILU_RICHARDSON), run_log=run_log)
    return solver.step(p_n, t_start, t_end)
