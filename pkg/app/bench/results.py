"""Per-run CSV rows: one row per (config, realization, time step)."""
import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from app.core.config import settings
from app.core.errors import ResultIOError
from app.schemas.report import STAGES, ConvergenceReport

COLUMNS = (
    "experiment",
    "config_id",
    "realization",
    "seed",
    "step",
    "t_start",
    "t_end",
    "outer_iterations",
    "inner_iterations",
    "assembly_s",
    "basis_s",
    "coarse_s",
    "smoothing_s",
    "norm_s",
    "total_s",
    "local_solves",
    "success",
    "failure_stage",
    "final_error",
    "error_history",
    "residual_history",
)

_INT_COLUMNS = ("realization", "seed", "step", "outer_iterations", "inner_iterations", "local_solves")
_FLOAT_COLUMNS = ("t_start", "t_end", "total_s") + tuple(f"{s}_s" for s in STAGES)


def _fmt(value: float) -> str:
    return settings.FIELD_FLOAT_FORMAT % value


def _join(values: Sequence[float]) -> str:
    return ";".join(_fmt(v) for v in values)


def report_row(
    experiment: str,
    config_id: str,
    realization: int,
    seed: int,
    step: int,
    report: ConvergenceReport,
) -> Dict:
    times = report.stage_seconds
    row = {
        "experiment": experiment,
        "config_id": config_id,
        "realization": realization,
        "seed": seed,
        "step": step,
        "t_start": report.t_start,
        "t_end": report.t_end,
        "outer_iterations": report.outer_iterations,
        "inner_iterations": report.inner_iterations,
        "total_s": round(times.total, 6),
        "local_solves": report.local_solves,
        "success": report.success,
        "failure_stage": report.failure_stage or "",
        "final_error": report.final_error,
        "error_history": list(report.error_history),
        "residual_history": report.residual_history,
    }
    for stage in STAGES:
        row[f"{stage}_s"] = getattr(times, stage)
    return row


def skipped_row(
    experiment: str,
    config_id: str,
    realization: int,
    seed: int,
    step: int,
    window: Sequence[float],
    stage: str = "skipped",
) -> Dict:
    """Row for a step that never ran because an earlier step or the setup failed."""
    report = ConvergenceReport(t_start=window[0], t_end=window[1], failure_stage=stage)
    return report_row(experiment, config_id, realization, seed, step, report)


def _encode(row: Dict) -> Dict[str, str]:
    out = {}
    for key in COLUMNS:
        value = row[key]
        if key in ("error_history", "residual_history"):
            out[key] = _join(value)
        elif key == "final_error":
            out[key] = "" if value is None else _fmt(value)
        elif key == "success":
            out[key] = "1" if value else "0"
        else:
            out[key] = str(value)
    return out


def _decode(raw: Dict[str, str]) -> Dict:
    row: Dict = dict(raw)
    for key in _INT_COLUMNS:
        row[key] = int(raw[key])
    for key in _FLOAT_COLUMNS:
        row[key] = float(raw[key])
    row["success"] = raw["success"] == "1"
    row["final_error"] = float(raw["final_error"]) if raw["final_error"] else None
    for key in ("error_history", "residual_history"):
        row[key] = [float(v) for v in raw[key].split(";")] if raw[key] else []
    return row


def write_csv(path: Union[str, Path], rows: List[Dict]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fp:
            writer = csv.DictWriter(fp, fieldnames=COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow(_encode(row))
    except OSError as exc:
        raise ResultIOError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path: Union[str, Path], experiment: Optional[str] = None) -> List[Dict]:
    path = Path(path)
    try:
        with open(path, newline="") as fp:
            reader = csv.DictReader(fp)
            if tuple(reader.fieldnames or ()) != COLUMNS:
                raise ResultIOError(f"{path} does not carry the bench column set")
            rows = [_decode(raw) for raw in reader]
    except OSError as exc:
        raise ResultIOError(f"cannot read {path}: {exc}") from exc
    if experiment is not None:
        rows = [row for row in rows if row["experiment"] == experiment]
    return rows
