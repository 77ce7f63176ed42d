import argparse

from app.bench.cases import DEFAULT_SWEEP_VALUES, build_experiment
from app.bench.runner import run_experiment
from app.bench.sweeps import SWEEPS, run_sweep
from app.cli.commands.common import load_config, output_dir
from app.cli.router import Command
from app.core.errors import ResultIOError
from app.core.logger import get_logger

logger = get_logger(__name__)


def bench(args: argparse.Namespace) -> int:
    config = load_config(args)
    spec = build_experiment(config)
    if args.seed is not None:
        spec = spec.model_copy(update={"seed": args.seed})
    jobs = args.jobs or spec.jobs
    out = output_dir(args, config)

    sweep = config.experiment.sweep
    if sweep.kind in SWEEPS:
        values = sweep.values or DEFAULT_SWEEP_VALUES[sweep.kind]
        table = run_sweep(spec, sweep.kind, values, jobs=jobs, output_dir=str(out))
        document, target = table, out / f"{spec.name}_{sweep.kind.value}.json"
        logger.info("%s sweep: best value %s", sweep.kind.value, table.best)
    else:
        summary, _ = run_experiment(spec, jobs=jobs, output_dir=str(out))
        document, target = summary, out / f"{spec.name}_summary.json"
        logger.info("fastest config %s", summary.fastest)
    try:
        target.write_text(document.model_dump_json(indent=2))
    except OSError as exc:
        raise ResultIOError(f"cannot write {target}: {exc}") from exc
    return 0


command = Command(handler=bench, help="run an ensemble experiment")
