import argparse
from pathlib import Path

from app.core.config import load_run_config
from app.schemas.run_config import RunConfigFile


def load_config(args: argparse.Namespace) -> RunConfigFile:
    if args.config is None:
        return RunConfigFile()
    return load_run_config(args.config)


def resolve_seed(args: argparse.Namespace, config: RunConfigFile) -> int:
    return config.experiment.seed if args.seed is None else args.seed


def output_dir(args: argparse.Namespace, config: RunConfigFile) -> Path:
    return Path(args.output or config.experiment.output_dir)
