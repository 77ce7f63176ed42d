"""Ensemble statistics over bench rows.

Timing statistics use successful runs only; success rates count every run.
A run is one (config, realization) pair and succeeds when all its steps do.
"""
import statistics
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.bench.results import read_csv
from app.core.errors import ResultIOError
from app.schemas.experiment import ConfigSummary, EnsembleSummary, StepSummary
from app.schemas.report import STAGES, StageTimes


def _mean(values: Sequence[float]) -> Optional[float]:
    return statistics.mean(values) if values else None


def _std(values: Sequence[float]) -> Optional[float]:
    if not values:
        return None
    return statistics.stdev(values) if len(values) > 1 else 0.0


def _stage_stats(rows: List[Dict]) -> Tuple[Optional[StageTimes], Optional[StageTimes]]:
    if not rows:
        return None, None
    mean = StageTimes(**{s: _mean([row[f"{s}_s"] for row in rows]) for s in STAGES})
    std = StageTimes(**{s: _std([row[f"{s}_s"] for row in rows]) for s in STAGES})
    return mean, std


def _group_runs(rows: List[Dict]) -> Dict[str, Dict[int, List[Dict]]]:
    configs: Dict[str, Dict[int, List[Dict]]] = {}
    for row in rows:
        runs = configs.setdefault(row["config_id"], {})
        runs.setdefault(row["realization"], []).append(row)
    return configs


def _summarize_config(config_id: str, runs: Dict[int, List[Dict]]) -> ConfigSummary:
    ordered = [sorted(steps, key=lambda row: row["step"]) for _, steps in sorted(runs.items())]
    good = [steps for steps in ordered if all(row["success"] for row in steps)]

    step_ids = sorted({row["step"] for steps in ordered for row in steps})
    step_summaries = []
    for step in step_ids:
        all_rows = [row for steps in ordered for row in steps if row["step"] == step]
        good_rows = [row for steps in good for row in steps if row["step"] == step]
        mean, std = _stage_stats(good_rows)
        totals = [row["total_s"] for row in good_rows]
        step_summaries.append(
            StepSummary(
                step=step,
                t_start=all_rows[0]["t_start"],
                t_end=all_rows[0]["t_end"],
                runs=len(all_rows),
                successes=sum(1 for row in all_rows if row["success"]),
                mean_outer=_mean([row["outer_iterations"] for row in good_rows]),
                mean_inner=_mean([row["inner_iterations"] for row in good_rows]),
                mean_seconds=mean,
                std_seconds=std,
                mean_total=_mean(totals),
                std_total=_std(totals),
            )
        )

    totals = [sum(row["total_s"] for row in steps) for steps in good]
    run_seconds = None
    if good:
        run_seconds = StageTimes(
            **{s: _mean([sum(row[f"{s}_s"] for row in steps) for steps in good]) for s in STAGES}
        )
    return ConfigSummary(
        config_id=config_id,
        runs=len(ordered),
        successes=len(good),
        success_rate=100.0 * len(good) / len(ordered),
        mean_outer=_mean([sum(row["outer_iterations"] for row in steps) for steps in good]),
        mean_inner=_mean([sum(row["inner_iterations"] for row in steps) for steps in good]),
        mean_seconds=run_seconds,
        mean_total=_mean(totals),
        std_total=_std(totals),
        steps=step_summaries,
    )


def summarize(rows: List[Dict], experiment: str) -> EnsembleSummary:
    configs = [_summarize_config(cid, runs) for cid, runs in _group_runs(rows).items()]
    timed = [c for c in configs if c.mean_total is not None]
    fastest = min(timed, key=lambda c: c.mean_total).config_id if timed else None
    return EnsembleSummary(experiment=experiment, configs=configs, fastest=fastest)


def summarize_csv(path: Union[str, Path], experiment: Optional[str] = None) -> EnsembleSummary:
    """Recompute the summary from a bench CSV file."""
    rows = read_csv(path, experiment)
    if not rows:
        raise ResultIOError(f"{path} holds no bench rows")
    return summarize(rows, experiment or rows[0]["experiment"])


TABLE_COLUMNS = (
    "config_id",
    "runs",
    "success_rate",
    "mean_outer",
    "mean_inner",
    "mean_total",
    "std_total",
) + STAGES


def format_table(summary: EnsembleSummary) -> str:
    """Whitespace separated table, readable by gnuplot and spreadsheets."""

    def cell(value) -> str:
        if value is None:
            return "nan"
        if isinstance(value, float):
            return f"{value:.6g}"
        return str(value)

    lines = [f"# experiment {summary.experiment}", "# " + " ".join(TABLE_COLUMNS)]
    for c in summary.configs:
        seconds = c.mean_seconds.model_dump() if c.mean_seconds else {}
        values = [
            c.config_id,
            c.runs,
            c.success_rate,
            c.mean_outer,
            c.mean_inner,
            c.mean_total,
            c.std_total,
        ] + [seconds.get(s) for s in STAGES]
        lines.append(" ".join(cell(v) for v in values))
    if summary.fastest:
        lines.append(f"# fastest {summary.fastest}")
    return "\n".join(lines) + "\n"


def write_table(summary: EnsembleSummary, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_table(summary))
    except OSError as exc:
        raise ResultIOError(f"cannot write {path}: {exc}") from exc
    return path
