"""Legacy VTK structured-points files for cell fields on the fine grid."""
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.errors import DimensionError, ResultIOError
from app.schemas.grid import FineGrid


def write_structured_points(
    path: Union[str, Path],
    grid: FineGrid,
    fields: Dict[str, np.ndarray],
    title: str = "pressure",
) -> Path:
    """ASCII STRUCTURED_POINTS with one CELL_DATA scalar block per field."""
    path = Path(path)
    for name, values in fields.items():
        if np.asarray(values).size != grid.n_cells:
            raise DimensionError(f"{name} has {np.asarray(values).size} values for {grid.n_cells} cells")
    fmt = settings.FIELD_FLOAT_FORMAT
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wt") as fp:
            fp.write("\n".join([
                "# vtk DataFile Version 3.0",
                title,
                "ASCII",
                "DATASET STRUCTURED_POINTS",
                f"DIMENSIONS {grid.nx + 1} {grid.ny + 1} {grid.nz + 1}",
                "ORIGIN 0 0 0",
                f"SPACING {fmt % grid.dx} {fmt % grid.dy} {fmt % grid.dz}",
                f"CELL_DATA {grid.n_cells}\n",
            ]))
            for name, values in fields.items():
                fp.write(f"SCALARS {name} double 1\n")
                fp.write("LOOKUP_TABLE default\n")
                fp.write("\n".join(fmt % v for v in np.asarray(values, dtype=np.float64).ravel()))
                fp.write("\n")
    except OSError as exc:
        raise ResultIOError(f"cannot write {path}: {exc}") from exc
    return path


def read_structured_points(path: Union[str, Path]) -> Tuple[FineGrid, Dict[str, np.ndarray]]:
    """Reader for the files written above."""
    lines = Path(path).read_text().splitlines()
    header = {}
    fields: Dict[str, np.ndarray] = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if parts and parts[0] in ("DIMENSIONS", "SPACING", "CELL_DATA"):
            header[parts[0]] = parts[1:]
        if parts and parts[0] == "SCALARS":
            n = int(header["CELL_DATA"][0])
            fields[parts[1]] = np.array([float(v) for v in lines[i + 2:i + 2 + n]])
            i += 2 + n
            continue
        i += 1
    nx, ny, nz = (int(v) - 1 for v in header["DIMENSIONS"])
    dx, dy, dz = (float(v) for v in header["SPACING"])
    return FineGrid(nx=nx, ny=ny, nz=nz, dx=dx, dy=dy, dz=dz), fields
