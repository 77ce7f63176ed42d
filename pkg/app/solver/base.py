"""Outer (nonlinear) loop shared by all solver methods.

The system is relinearized at entry and whenever the inner loop has reduced
the linear residual by the configured factor; the nonlinear error is only
evaluated at those points.
"""
import logging
from typing import Hashable, List, Optional, Tuple

import numpy as np

from app.core.errors import SolverError
from app.core.logger import RunLog, create_log, get_logger
from app.core.timing import StageTimer
from app.linalg.norms import norm2
from app.physics.assembly import LinearSystem, Problem, SimState, assemble, error_from_system
from app.schemas.report import ConvergenceReport, InnerRecord
from app.schemas.solver import SolverConfig, SolverMethod
from app.schemas.solver_event import EventStage, EventType

logger = get_logger(__name__)


class _StepFailed(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage
        self.message = message


class NonlinearSolver:
    method: SolverMethod = SolverMethod.MULTISCALE

    def __init__(self, problem: Problem, config: SolverConfig, run_log: Optional[RunLog] = None):
        self.problem = problem
        self.config = config
        self.run_log = run_log
        self._stage = "assembly"

    # hooks

    def prepare(self, system: LinearSystem, step_key: Hashable, timer: StageTimer) -> None:
        raise NotImplementedError

    def inner_iteration(
        self, system: LinearSystem, p: np.ndarray, r: np.ndarray, timer: StageTimer
    ) -> Tuple[np.ndarray, Optional[float]]:
        raise NotImplementedError

    def finalize(
        self, system: LinearSystem, p: np.ndarray, timer: StageTimer, report: ConvergenceReport
    ) -> np.ndarray:
        return p

    @property
    def local_solves(self) -> int:
        return 0

    @property
    def refreshed_blocks(self) -> int:
        return 0

    # loop

    def _assemble(self, p_n: np.ndarray, p: np.ndarray, dt: float, t: float, timer: StageTimer) -> LinearSystem:
        self._stage = "assembly"
        with timer.stage("assembly"):
            return assemble(self.problem, SimState(p_n=p_n, p_nu=p, dt=dt, t=t), self.config.c_evaluation)

    def _error(self, system: LinearSystem, p: np.ndarray, timer: StageTimer) -> float:
        self._stage = "norm"
        with timer.stage("norm"):
            return norm2(error_from_system(system, p))

    def _linear_done(self, system: LinearSystem, r: np.ndarray, rn: float, r0: float) -> bool:
        if r0 == 0.0:
            return True
        if self.problem.is_linear:
            scaled = norm2(np.where(system.constrained, r, r / system.volume))
            scaled_f = norm2(np.where(system.constrained, system.f, system.f / system.volume))
            return scaled < max(self.config.linear_model_tol, 1e-13 * scaled_f)
        return rn / r0 < self.config.linear_reduction

    def step(
        self, p_n: np.ndarray, t_start: float, t_end: float, step_key: Hashable = None
    ) -> Tuple[np.ndarray, ConvergenceReport]:
        cfg = self.config
        dt = t_end - t_start
        timer = StageTimer()
        report = ConvergenceReport(method=self.method.value, t_start=t_start, t_end=t_end)
        solves_before = self.local_solves
        refreshed_before = self.refreshed_blocks
        p = np.array(p_n, dtype=np.float64, copy=True)
        p_n = np.array(p_n, dtype=np.float64, copy=True)
        step_key = (t_start, t_end) if step_key is None else step_key
        self._p_n, self._dt = p_n, dt

        try:
            system = self._assemble(p_n, p, dt, t_end, timer)
            err = self._error(system, p, timer)
            report.error_history.append(err)
            self._log_relinearize(report, err)
            if not np.isfinite(err):
                raise _StepFailed("norm", "non-finite nonlinear error at entry")

            while err >= cfg.nonlinear_tol:
                if report.outer_iterations >= cfg.max_outer:
                    raise _StepFailed("max_outer", f"no convergence in {cfg.max_outer} outer iterations")
                report.outer_iterations += 1
                outer = report.outer_iterations
                self.prepare(system, step_key, timer)

                r = system.f - system.A @ p
                r0 = norm2(r)
                rn = r0
                prev_rn = r0
                inner = 0
                while not self._linear_done(system, r, rn, r0):
                    if inner >= cfg.max_inner:
                        raise _StepFailed("max_inner", f"inner loop did not reach its target in {cfg.max_inner} iterations")
                    inner += 1
                    report.inner_iterations += 1
                    p, coarse_res = self.inner_iteration(system, p, r, timer)
                    self._stage = "smoothing"
                    with timer.stage("smoothing"):
                        r = system.f - system.A @ p
                        rn = norm2(r)
                    if not np.isfinite(rn):
                        raise _StepFailed("smoothing", "non-finite residual")
                    record = InnerRecord(outer=outer, inner=inner, residual=rn, coarse_residual=coarse_res)
                    if cfg.track_inner_error:
                        candidate = self._assemble(p_n, p, dt, t_end, timer)
                        record.error = self._error(candidate, p, timer)
                    report.inner_log.append(record)
                    if rn >= prev_rn:
                        self._log_non_monotone(outer, inner, prev_rn, rn)
                    prev_rn = rn
                    create_log(
                        EventStage.SMOOTHING,
                        EventType.INNER,
                        "inner iteration",
                        run_log=self.run_log,
                        outer=outer,
                        inner=inner,
                        norm=rn,
                    )

                system = self._assemble(p_n, p, dt, t_end, timer)
                err = self._error(system, p, timer)
                report.error_history.append(err)
                self._log_relinearize(report, err)
                if not np.isfinite(err):
                    raise _StepFailed("norm", "non-finite nonlinear error")

            report.success = True
            if report.outer_iterations:
                p = self.finalize(system, p, timer, report)
        except _StepFailed as exc:
            report.success = False
            report.failure_stage = exc.stage
            report.message = exc.message
        except SolverError as exc:
            report.success = False
            report.failure_stage = self._stage
            report.message = exc.detail

        report.stage_seconds = timer.snapshot().rounded()
        report.local_solves = self.local_solves - solves_before
        report.refreshed_blocks = self.refreshed_blocks - refreshed_before
        create_log(
            EventStage.SCHEDULE,
            EventType.CONVERGED if report.success else EventType.FAILED,
            report.message or f"step to t*={t_end} converged",
            run_log=self.run_log,
            outer=report.outer_iterations,
            inner=report.inner_iterations,
            norm=report.final_error,
        )
        if not report.success:
            logger.warning("step to t*=%s failed at %s: %s", t_end, report.failure_stage, report.message)
        return p, report

    def _log_non_monotone(self, outer: int, inner: int, previous: float, current: float) -> None:
        create_log(
            EventStage.SMOOTHING,
            EventType.NON_MONOTONE,
            "non-monotone inner residual",
            run_log=self.run_log,
            outer=outer,
            inner=inner,
            norm=current,
            metadata={"previous": previous},
            level=logging.WARNING,
        )

    def _log_relinearize(self, report: ConvergenceReport, err: float) -> None:
        create_log(
            EventStage.NORM,
            EventType.RELINEARIZE,
            "nonlinear error evaluated",
            run_log=self.run_log,
            outer=report.outer_iterations,
            norm=err,
        )


def inner_residuals(report: ConvergenceReport, outer: int) -> List[float]:
    return [rec.residual for rec in report.inner_log if rec.outer == outer]
