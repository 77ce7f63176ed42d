from enum import Enum
from typing import Dict, List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator


class FluidModel(BaseModel):
    eta: float = Field(default=1.0, ge=0)
    rho0: float = Field(default=1.0, gt=0)
    mu: float = Field(default=2e-6, gt=0)

    model_config = {"extra": "forbid"}


class RockModel(BaseModel):
    porosity: float = Field(default=0.1, gt=0, lt=1)
    dphi_dp: float = 0.0

    model_config = {"extra": "forbid"}


class ReferenceScales(BaseModel):
    """Scales of the nondimensional formulation.

    ``length`` defaults to the x extent of the domain when omitted.
    """

    k_ref: float = Field(default=1e-12, gt=0)
    delta_p: float = Field(default=1e6, gt=0)
    length: Optional[float] = Field(default=None, gt=0)

    model_config = {"extra": "forbid"}


class FluidConfig(BaseModel):
    eta: float = Field(default=1.0, ge=0)
    rho0: float = Field(default=1.0, gt=0)
    mu: float = Field(default=2e-6, gt=0)
    rock: RockModel = Field(default_factory=RockModel)
    reference: ReferenceScales = Field(default_factory=ReferenceScales)

    model_config = {"extra": "forbid"}

    def fluid(self) -> FluidModel:
        return FluidModel(eta=self.eta, rho0=self.rho0, mu=self.mu)


class FaceName(str, Enum):
    WEST = "west"
    EAST = "east"
    SOUTH = "south"
    NORTH = "north"
    BOTTOM = "bottom"
    TOP = "top"


class LineSource(BaseModel):
    """Vertical column of cells (i, j, k_min..k_max) held at ``value``."""

    i: int = Field(ge=0)
    j: int = Field(ge=0)
    value: float
    k_min: int = Field(default=0, ge=0)
    k_max: Optional[int] = Field(default=None, ge=0)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def ordered_range(self):
        if self.k_max is not None and self.k_max < self.k_min:
            raise ValueError("k_max must not be below k_min")
        return self


class BoundarySpec(BaseModel):
    faces: Dict[FaceName, float] = Field(
        default_factory=lambda: {FaceName.WEST: 1.0, FaceName.EAST: 0.0}
    )
    line_sources: List[LineSource] = Field(default_factory=list)
    # volumetric source per cell, applied everywhere
    source: float = 0.0

    model_config = {"extra": "forbid"}

    @field_validator("line_sources")
    @classmethod
    def disjoint_line_sources(cls, v):
        seen = {}
        for src in v:
            for other in seen.get((src.i, src.j), []):
                lo = max(src.k_min, other.k_min)
                hi_a = src.k_max if src.k_max is not None else float("inf")
                hi_b = other.k_max if other.k_max is not None else float("inf")
                if lo <= min(hi_a, hi_b):
                    raise ValueError(
                        f"line sources overlap at column ({src.i}, {src.j}); "
                        "a cell carries at most one Dirichlet constraint"
                    )
            seen.setdefault((src.i, src.j), []).append(src)
        return v
