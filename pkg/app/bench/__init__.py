from .cases import (
    build_field,
    build_problem,
    problem_from_config,
    build_experiment,
    expand_solver_sweep,
    solver_variants,
    check_cases,
)
from .results import COLUMNS, write_csv, read_csv
from .summary import summarize, summarize_csv, format_table, write_table
from .runner import RunTask, realization_seeds, run_task, run_experiment
from .sweeps import SWEEPS, run_sweep, coarsening_sweep, variance_sweep, aspect_ratio_sweep

__all__ = [
    "build_field",
    "build_problem",
    "problem_from_config",
    "build_experiment",
    "expand_solver_sweep",
    "solver_variants",
    "check_cases",
    "COLUMNS",
    "write_csv",
    "read_csv",
    "summarize",
    "summarize_csv",
    "format_table",
    "write_table",
    "RunTask",
    "realization_seeds",
    "run_task",
    "run_experiment",
    "SWEEPS",
    "run_sweep",
    "coarsening_sweep",
    "variance_sweep",
    "aspect_ratio_sweep",
]
