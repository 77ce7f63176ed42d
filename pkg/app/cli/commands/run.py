import argparse

import numpy as np

from app.bench.cases import check_ratio, problem_from_config
from app.cli.commands.common import load_config, output_dir, resolve_seed
from app.cli.router import Command
from app.cli.vtk import write_structured_points
from app.core.config import write_run_config
from app.core.errors import ResultIOError
from app.core.logger import RunLog, get_logger
from app.schemas.report import ConvergenceReport, RunReport
from app.schemas.solver import SolverMethod
from app.solver.multiscale import MultiscaleSolver
from app.solver.schedule import make_solver, march

logger = get_logger(__name__)

EXIT_NOT_CONVERGED = 3


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--vtk", action="store_true", help="write a pressure snapshot per time step")
    parser.add_argument(
        "--dump-operators",
        action="store_true",
        help="write P, R and the coarse matrix (matrix market) and the hierarchy summary",
    )


def run(args: argparse.Namespace) -> int:
    config = load_config(args)
    if config.solver.method == SolverMethod.MULTISCALE:
        check_ratio(config.grid, config.solver.coarsening)
    problem = problem_from_config(config, resolve_seed(args, config))
    out = output_dir(args, config)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ResultIOError(f"cannot create output directory {out}: {exc}") from exc

    def snapshot(step: int, p: np.ndarray, report: ConvergenceReport) -> None:
        if args.vtk:
            write_structured_points(
                out / f"pressure_step{step}.vtk",
                problem.grid,
                {"pressure": p, "permeability": problem.field.k},
                title=f"pressure t*={report.t_end}",
            )

    solver = make_solver(problem, config.solver, run_log=RunLog())
    results = march(solver, config.schedule, on_step=snapshot)
    reports = [report for _, report in results]
    success = len(reports) == len(config.schedule.times) and all(r.success for r in reports)

    write_run_config(config, out / "config.yaml")
    document = RunReport(config=config.model_dump(mode="json"), steps=reports, success=success)
    try:
        (out / "report.json").write_text(document.model_dump_json(indent=2))
    except OSError as exc:
        raise ResultIOError(f"cannot write {out / 'report.json'}: {exc}") from exc

    if args.dump_operators:
        if isinstance(solver, MultiscaleSolver) and solver.operators.P is not None:
            solver.operators.dump(out / "operators")
            solver.hierarchy.dump_summary(out / "operators" / "hierarchy.yaml")
        else:
            logger.warning("no multiscale operators to dump for method %s", config.solver.method.value)

    for report in reports:
        logger.info(
            "t*=%s..%s outer %d inner %d error %s",
            report.t_start,
            report.t_end,
            report.outer_iterations,
            report.inner_iterations,
            report.final_error,
        )
    if not success:
        failed = reports[-1]
        logger.error("step to t*=%s failed at %s: %s", failed.t_end, failed.failure_stage, failed.message)
        return EXIT_NOT_CONVERGED
    return 0


command = Command(handler=run, add_arguments=add_arguments, help="simulate the time schedule")
