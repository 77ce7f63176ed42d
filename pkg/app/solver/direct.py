from typing import Hashable, Optional, Tuple

import numpy as np

from app.core.logger import RunLog
from app.core.timing import StageTimer
from app.linalg.lu import SparseLuFactors, sparse_lu_factor
from app.physics.assembly import LinearSystem, Problem
from app.schemas.report import ConvergenceReport
from app.schemas.solver import SolverConfig, SolverMethod
from app.solver.base import NonlinearSolver


class DirectSolver(NonlinearSolver):
    """Reference solver: every linearized system is solved by sparse LU."""

    method = SolverMethod.DIRECT

    def __init__(self, problem: Problem, config: SolverConfig, run_log: Optional[RunLog] = None):
        super().__init__(problem, config, run_log)
        self.lu: Optional[SparseLuFactors] = None

    def prepare(self, system: LinearSystem, step_key: Hashable, timer: StageTimer) -> None:
        self._stage = "coarse"
        with timer.stage("coarse"):
            self.lu = sparse_lu_factor(system.A)

    def _linear_done(self, system: LinearSystem, r: np.ndarray, rn: float, r0: float) -> bool:
        # one exact solve per linearization
        return r0 == 0.0 or rn < r0

    def inner_iteration(
        self, system: LinearSystem, p: np.ndarray, r: np.ndarray, timer: StageTimer
    ) -> Tuple[np.ndarray, Optional[float]]:
        self._stage = "coarse"
        with timer.stage("coarse"):
            return self.lu.solve(system.f), None


def direct_solve(
    problem: Problem,
    p_n: np.ndarray,
    t_start: float,
    t_end: float,
    config: Optional[SolverConfig] = None,
    run_log: Optional[RunLog] = None,
) -> Tuple[np.ndarray, ConvergenceReport]:
    solver = DirectSolver(problem, config or SolverConfig(method=SolverMethod.DIRECT), run_log=run_log)
    return solver.step(p_n, t_start, t_end)
