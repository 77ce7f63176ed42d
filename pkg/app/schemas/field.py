from typing import Dict, Optional, Tuple
from pydantic import BaseModel, Field, field_validator

from app.schemas.grid import FineGrid


class FieldSpec(BaseModel):
    nx: int = Field(ge=1)
    ny: int = Field(ge=1)
    nz: int = Field(ge=1)
    mean_lnk: float = -1.0
    var_lnk: float = Field(default=4.0, ge=0)
    # dimensionless correlation lengths; psi[0] is the principal direction
    psi: Tuple[float, float, float] = (0.125, 0.125, 0.125)
    orientation_deg: float = 0.0
    seed: int = 0

    model_config = {"extra": "forbid"}

    @field_validator("psi")
    @classmethod
    def non_negative_lengths(cls, v):
        if any(value < 0 for value in v):
            raise ValueError("correlation lengths must be non-negative")
        return v

    @property
    def dims(self) -> Tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    def matches(self, grid: FineGrid) -> bool:
        return self.dims == grid.dims


# Six reference ensembles: grid, correlation lengths and orientation from the
# patchy (1-3) and layered (4-6) permeability sets.
PERMEABILITY_SETS: Dict[int, dict] = {
    1: {"dims": (64, 64, 64), "psi": (0.125, 0.125, 0.125), "orientation_deg": 0.0},
    2: {"dims": (128, 128, 128), "psi": (0.125, 0.125, 0.125), "orientation_deg": 0.0},
    3: {"dims": (256, 256, 256), "psi": (0.125, 0.125, 0.125), "orientation_deg": 0.0},
    4: {"dims": (64, 64, 64), "psi": (0.5, 0.03, 0.01), "orientation_deg": 15.0},
    5: {"dims": (128, 128, 128), "psi": (0.5, 0.03, 0.06), "orientation_deg": 15.0},
    6: {"dims": (256, 256, 256), "psi": (0.5, 0.03, 0.01), "orientation_deg": 15.0},
}


class FieldConfig(BaseModel):
    """Field section of a run configuration.

    Either a generated field (``preset`` and/or explicit statistics) or a
    field file given by ``file``.
    """

    preset: Optional[int] = None
    mean_lnk: float = -1.0
    var_lnk: float = Field(default=4.0, ge=0)
    psi: Optional[Tuple[float, float, float]] = None
    orientation_deg: Optional[float] = None
    file: Optional[str] = None

    model_config = {"extra": "forbid"}

    @field_validator("preset")
    @classmethod
    def known_preset(cls, v):
        if v is not None and v not in PERMEABILITY_SETS:
            raise ValueError(f"unknown permeability set {v}, expected one of {sorted(PERMEABILITY_SETS)}")
        return v

    def to_spec(self, grid: FineGrid, seed: int) -> FieldSpec:
        preset = PERMEABILITY_SETS.get(self.preset, {}) if self.preset else {}
        psi = self.psi if self.psi is not None else preset.get("psi", (0.125, 0.125, 0.125))
        orientation = (
            self.orientation_deg
            if self.orientation_deg is not None
            else preset.get("orientation_deg", 0.0)
        )
        return FieldSpec(
            nx=grid.nx,
            ny=grid.ny,
            nz=grid.nz,
            mean_lnk=self.mean_lnk,
            var_lnk=self.var_lnk,
            psi=psi,
            orientation_deg=orientation,
            seed=seed,
        )
