from typing import Hashable, Optional, Tuple

import numpy as np

from app.core.logger import RunLog
from app.core.timing import StageTimer
from app.grid.hierarchy import GridHierarchy, build_hierarchy
from app.linalg.ilu import Ilu0Factors, ilu0_factor, ilu0_smooth
from app.multiscale.operators import MultiscaleOperators
from app.physics.assembly import LinearSystem, Problem
from app.schemas.report import ConvergenceReport
from app.schemas.solver import CorrectionVariant, RestrictionKind, SolverConfig, SolverMethod
from app.solver.base import NonlinearSolver


class MultiscaleSolver(NonlinearSolver):
    """Two-stage iteration: global multiscale correction, then ILU(0) smoothing."""

    method = SolverMethod.MULTISCALE

    def __init__(
        self,
        problem: Problem,
        config: SolverConfig,
        hierarchy: Optional[GridHierarchy] = None,
        run_log: Optional[RunLog] = None,
    ):
        super().__init__(problem, config, run_log)
        self.hierarchy = hierarchy or build_hierarchy(problem.grid, config.coarsening)
        self.operators = MultiscaleOperators(self.hierarchy, config, run_log=run_log)
        self.ilu: Optional[Ilu0Factors] = None

    @property
    def local_solves(self) -> int:
        return self.operators.local_solves

    @property
    def refreshed_blocks(self) -> int:
        return self.operators.refreshed_blocks

    def prepare(self, system: LinearSystem, step_key: Hashable, timer: StageTimer) -> None:
        self._stage = "basis"
        with timer.stage("basis"):
            self.operators.update_basis(system, step_key)
        self._stage = "coarse"
        with timer.stage("coarse"):
            self.operators.update_coarse(system)
        self._stage = "smoothing"
        with timer.stage("smoothing"):
            self.ilu = ilu0_factor(system.A)

    def inner_iteration(
        self, system: LinearSystem, p: np.ndarray, r: np.ndarray, timer: StageTimer
    ) -> Tuple[np.ndarray, Optional[float]]:
        if self.config.correction != CorrectionVariant.NONE:
            self._stage = "smoothing"
            with timer.stage("smoothing"):
                p = p + self.operators.correction(r)
                r = system.f - system.A @ p
        self._stage = "coarse"
        with timer.stage("coarse"):
            delta = self.operators.apply(r)
            coarse_res = self.operators.coarse_residual(r, delta)
            p = p + delta
        self._stage = "smoothing"
        with timer.stage("smoothing"):
            p = ilu0_smooth(system.A, self.ilu, p, system.f, self.config.smoothing_steps)
        return p, coarse_res

    def finalize(
        self, system: LinearSystem, p: np.ndarray, timer: StageTimer, report: ConvergenceReport
    ) -> np.ndarray:
        if not (self.config.final_fv_sweep and self.config.restriction == RestrictionKind.FE):
            return p
        self._stage = "coarse"
        with timer.stage("coarse"):
            p = self.operators.fv_sweep(system, p)
        after = self._assemble(self._p_n, p, self._dt, report.t_end, timer)
        report.conservative_sweep_error = self._error(after, p, timer)
        return p


def cams_step(
    problem: Problem,
    p_n: np.ndarray,
    t_start: float,
    t_end: float,
    config: Optional[SolverConfig] = None,
    hierarchy: Optional[GridHierarchy] = None,
    run_log: Optional[RunLog] = None,
) -> Tuple[np.ndarray, ConvergenceReport]:
    """One implicit Euler step with the multiscale solver."""
    solver = MultiscaleSolver(problem, config or SolverConfig(), hierarchy=hierarchy, run_log=run_log)
    return solver.step(p_n, t_start, t_end)
