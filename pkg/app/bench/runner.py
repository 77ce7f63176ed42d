"""Ensemble runner: every realization of every case through the full schedule."""
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from app.bench.cases import build_problem, check_cases
from app.bench.results import report_row, skipped_row, write_csv
from app.bench.summary import summarize, write_table
from app.core.errors import SolverError
from app.core.logger import create_log, get_logger
from app.schemas.experiment import EnsembleSummary, ExperimentCase, ExperimentSpec
from app.schemas.report import ConvergenceReport
from app.schemas.solver_event import EventStage, EventType
from app.solver.schedule import make_solver, march

logger = get_logger(__name__)


class RunTask(NamedTuple):
    spec: ExperimentSpec
    case: ExperimentCase
    realization: int
    seed: int


def realization_seeds(seed: int, n: int) -> List[int]:
    """Independent per-realization seeds split from one top-level seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in children]


def run_task(task: RunTask) -> List[Dict]:
    """All schedule steps of one realization; failures become failed rows."""
    spec, case = task.spec, task.case
    windows = spec.schedule.windows()
    reports: List[ConvergenceReport] = []
    stage = None
    try:
        problem = build_problem(case.grid, case.field, spec.fluid, spec.boundary, task.seed)
        solver = make_solver(problem, case.solver)
        march(solver, spec.schedule, on_step=lambda _, __, report: reports.append(report))
    except SolverError as exc:
        stage = "setup"
        logger.warning("%s realization %d could not run: %s", case.config_id, task.realization, exc)
    except Exception as exc:
        stage = "internal"
        create_log(
            EventStage.BENCH,
            EventType.FAILED,
            f"{case.config_id} realization {task.realization} step {len(reports) + 1}: {exc!r}",
            metadata={"seed": task.seed, "error": type(exc).__name__},
            level=logging.ERROR,
        )

    rows = [
        report_row(spec.name, case.config_id, task.realization, task.seed, step, report)
        for step, report in enumerate(reports, start=1)
    ]
    first_missing = len(reports) + 1
    for step in range(first_missing, len(windows) + 1):
        # a setup failure marks every step, an internal one only the step it hit
        failed = stage if stage == "setup" or (stage and step == first_missing) else "skipped"
        rows.append(
            skipped_row(spec.name, case.config_id, task.realization, task.seed, step, windows[step - 1], stage=failed)
        )
    return rows


def experiment_tasks(spec: ExperimentSpec) -> List[RunTask]:
    # the same seeds for every case, so configs are compared on paired fields
    seeds = realization_seeds(spec.seed, spec.n_realizations)
    return [
        RunTask(spec=spec, case=case, realization=r, seed=seeds[r])
        for case in spec.cases
        for r in range(spec.n_realizations)
    ]


def execute(tasks: List[RunTask], jobs: int = 1) -> List[Dict]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(run_task, tasks))
    else:
        batches = [run_task(task) for task in tasks]
    return [row for batch in batches for row in batch]


def output_paths(spec: ExperimentSpec, output_dir: Optional[str] = None) -> Tuple[Path, Path]:
    directory = Path(output_dir or spec.output_dir)
    return directory / f"{spec.name}.csv", directory / f"{spec.name}_summary.txt"


def run_experiment(
    spec: ExperimentSpec,
    jobs: Optional[int] = None,
    output_dir: Optional[str] = None,
) -> Tuple[EnsembleSummary, List[Dict]]:
    """Run the ensemble, write the CSV and the summary table, return both."""
    check_cases(spec.cases)
    jobs = jobs or spec.jobs
    tasks = experiment_tasks(spec)
    create_log(
        EventStage.BENCH,
        EventType.RUN,
        f"experiment {spec.name}: {len(spec.cases)} configs x {spec.n_realizations} realizations",
        metadata={"jobs": jobs},
    )
    rows = execute(tasks, jobs)
    summary = summarize(rows, spec.name)
    csv_path, table_path = output_paths(spec, output_dir)
    write_csv(csv_path, rows)
    write_table(summary, table_path)
    for config in summary.configs:
        logger.info(
            "%s: success %.0f%%, mean total %s s",
            config.config_id,
            config.success_rate,
            "n/a" if config.mean_total is None else f"{config.mean_total:.3f}",
        )
    return summary, rows
