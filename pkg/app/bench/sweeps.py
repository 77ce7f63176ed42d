"""Sweeps that change the grid or the field: one ensemble per swept value."""
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from app.bench.cases import as_ratio, check_ratio
from app.bench.runner import run_experiment
from app.bench.summary import format_table
from app.core.errors import ConfigurationError, ResultIOError
from app.schemas.experiment import (
    ExperimentCase,
    ExperimentSpec,
    SweepEntry,
    SweepKind,
    SweepTable,
)
from app.schemas.solver import SolverMethod


def _tag(value: Any) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _label(kind: SweepKind, value: Any) -> str:
    if kind == SweepKind.COARSENING:
        return as_ratio(value).label()
    return _tag(value)


def _coarsening(case: ExperimentCase, value: Any) -> ExperimentCase:
    ratio = as_ratio(value)
    if case.solver.method != SolverMethod.MULTISCALE:
        return case
    check_ratio(case.grid, ratio)
    solver = case.solver.model_copy(update={"coarsening": ratio})
    return case.model_copy(update={"solver": solver, "config_id": solver.config_id})


def _variance(case: ExperimentCase, value: Any) -> ExperimentCase:
    value = float(value)
    if value < 0:
        raise ConfigurationError(f"log-permeability variance must be non-negative, got {value}")
    field = case.field.model_copy(update={"var_lnk": value})
    return case.model_copy(update={"field": field, "config_id": f"{case.config_id}-var{_tag(value)}"})


def _aspect_ratio(case: ExperimentCase, value: Any) -> ExperimentCase:
    value = float(value)
    if value <= 0:
        raise ConfigurationError(f"aspect ratio must be positive, got {value}")
    grid = case.grid.model_copy(update={"alpha": value})
    return case.model_copy(update={"grid": grid, "config_id": f"{case.config_id}-alpha{_tag(value)}"})


SWEEPS: Dict[SweepKind, Callable[[ExperimentCase, Any], ExperimentCase]] = {
    SweepKind.COARSENING: _coarsening,
    SweepKind.VARIANCE: _variance,
    SweepKind.ASPECT_RATIO: _aspect_ratio,
}


def sweep_specs(spec: ExperimentSpec, kind: SweepKind, values: Sequence[Any]) -> List[ExperimentSpec]:
    """One experiment per value; all are built before anything runs."""
    if kind not in SWEEPS:
        raise ConfigurationError(f"{kind.value} is not a grid or field sweep")
    if not values:
        raise ConfigurationError(f"{kind.value} sweep needs at least one value")
    transform = SWEEPS[kind]
    specs = []
    for value in values:
        cases = [transform(case, value) for case in spec.cases]
        name = f"{spec.name}_{kind.value}_{_label(kind, value)}"
        specs.append(spec.model_copy(update={"cases": cases, "name": name}))
    return specs


def run_sweep(
    spec: ExperimentSpec,
    kind: SweepKind,
    values: Sequence[Any],
    jobs: Optional[int] = None,
    output_dir: Optional[str] = None,
) -> SweepTable:
    specs = sweep_specs(spec, kind, values)
    entries = []
    for value, sub in zip(values, specs):
        summary, _ = run_experiment(sub, jobs=jobs, output_dir=output_dir)
        entries.append(SweepEntry(value=_label(kind, value), summary=summary))

    def best_total(entry: SweepEntry) -> Optional[float]:
        if entry.summary.fastest is None:
            return None
        return entry.summary.by_id(entry.summary.fastest).mean_total

    timed = [e for e in entries if best_total(e) is not None]
    best = min(timed, key=best_total).value if timed else None
    table = SweepTable(kind=kind, entries=entries, best=best)
    write_sweep_table(table, Path(output_dir or spec.output_dir) / f"{spec.name}_{kind.value}.txt")
    return table


def coarsening_sweep(spec: ExperimentSpec, ratios: Sequence[Any], **kwargs) -> SweepTable:
    return run_sweep(spec, SweepKind.COARSENING, ratios, **kwargs)


def variance_sweep(spec: ExperimentSpec, variances: Sequence[float], **kwargs) -> SweepTable:
    return run_sweep(spec, SweepKind.VARIANCE, variances, **kwargs)


def aspect_ratio_sweep(spec: ExperimentSpec, alphas: Sequence[float], **kwargs) -> SweepTable:
    return run_sweep(spec, SweepKind.ASPECT_RATIO, alphas, **kwargs)


def write_sweep_table(table: SweepTable, path: Path) -> Path:
    blocks = [f"# {table.kind.value} sweep, best {table.best or 'n/a'}"]
    for entry in table.entries:
        blocks.append(f"# {table.kind.value} = {entry.value}")
        blocks.append(format_table(entry.summary))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(blocks))
    except OSError as exc:
        raise ResultIOError(f"cannot write {path}: {exc}") from exc
    return path
