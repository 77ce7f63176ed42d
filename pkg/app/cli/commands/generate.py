import argparse
from pathlib import Path

from app.bench.cases import build_field
from app.cli.commands.common import load_config, resolve_seed
from app.cli.router import Command
from app.core.errors import ResultIOError
from app.core.logger import get_logger
from app.fields.field_io import save

logger = get_logger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--field-file",
        default=None,
        help="target file (default: field.file from the config, else <output>/field_seed<seed>.txt)",
    )


def generate(args: argparse.Namespace) -> int:
    config = load_config(args)
    seed = resolve_seed(args, config)
    fine = config.grid.to_fine_grid()
    field = build_field(fine, config.field.model_copy(update={"file": None}), seed)
    if args.field_file:
        target = Path(args.field_file)
    elif config.field.file:
        target = Path(config.field.file)
    else:
        target = Path(args.output or config.experiment.output_dir) / f"field_seed{seed}.txt"
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ResultIOError(f"cannot create {target.parent}: {exc}") from exc
    save(target, field)
    logger.info("wrote %d permeability values to %s", field.n_cells, target)
    print(target)
    return 0


command = Command(handler=generate, add_arguments=add_arguments, help="generate a permeability field")
