"""Plain text field files: a header line ``nx ny nz`` then one k per line."""
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.errors import (
    ConfigurationError,
    DimensionError,
    FieldFormatError,
    FieldValidationError,
    ResultIOError,
)
from app.fields.generator import PermeabilityField


def save(path: Union[str, Path], field: PermeabilityField) -> None:
    fmt = settings.FIELD_FLOAT_FORMAT
    lines = ["%d %d %d" % tuple(field.dims)]
    lines.extend(fmt % value for value in field.k)
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise ResultIOError(f"cannot write field file {path}: {exc}") from exc


def load(path: Union[str, Path], dims: Optional[Tuple[int, int, int]] = None) -> PermeabilityField:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"field file not found: {path}")
    try:
        text = path.read_text()
    except OSError as exc:
        raise ResultIOError(f"cannot read field file {path}: {exc}") from exc

    lines = text.splitlines()
    if not lines:
        raise FieldFormatError("empty field file", line=1)
    header = lines[0].split()
    try:
        file_dims = tuple(int(v) for v in header)
    except ValueError:
        raise FieldFormatError(f"header must hold three integers, got {lines[0]!r}", line=1)
    if len(file_dims) != 3 or min(file_dims) < 1:
        raise FieldFormatError(f"header must hold three positive integers, got {lines[0]!r}", line=1)

    values = []
    for lineno, raw in enumerate(lines[1:], start=2):
        token = raw.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            raise FieldFormatError(f"cannot parse {token!r} as a number", line=lineno)
        if not np.isfinite(value) or value <= 0:
            raise FieldValidationError(f"line {lineno}: permeability must be positive, got {token}")
        values.append(value)

    expected = int(np.prod(file_dims))
    if len(values) != expected:
        raise DimensionError(f"field file holds {len(values)} values, header announces {expected}")
    if dims is not None and tuple(dims) != file_dims:
        raise DimensionError(f"field file dims {file_dims} do not match grid {tuple(dims)}")
    return PermeabilityField(k=np.array(values), dims=file_dims)
