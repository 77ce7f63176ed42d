from enum import Enum
from typing import List, Optional, Tuple
from pydantic import BaseModel, Field, field_validator

from app.schemas.grid import CoarseningRatio


class BasisVariant(str, Enum):
    """Local operator used for basis functions."""

    B1 = "B1"  # accumulation c^nu + density weighted flux
    B2 = "B2"  # density weighted flux
    B3 = "B3"  # accumulation c^n + plain mobility flux
    B4 = "B4"  # plain mobility flux

    @property
    def pressure_dependent(self) -> bool:
        return self in (BasisVariant.B1, BasisVariant.B2)

    @property
    def has_accumulation(self) -> bool:
        return self in (BasisVariant.B1, BasisVariant.B3)


class RestrictionKind(str, Enum):
    FV = "FV"
    FE = "FE"


class CorrectionVariant(str, Enum):
    NONE = "none"
    CF1 = "CF1"
    CF2 = "CF2"
    CF3 = "CF3"
    CF4 = "CF4"

    @property
    def operator(self) -> Optional[BasisVariant]:
        """Basis operator whose local problems the correction reuses."""
        if self is CorrectionVariant.NONE:
            return None
        return BasisVariant("B" + self.value[-1])


class AccumulationEvaluation(str, Enum):
    CURRENT = "current"  # c at p^nu
    PREVIOUS = "previous"  # c at p^n


class SolverMethod(str, Enum):
    MULTISCALE = "multiscale"
    ILU_RICHARDSON = "ilu_richardson"
    DIRECT = "direct"


class AdaptivityPolicy(BaseModel):
    threshold: float = Field(default=0.05, ge=0)
    linear_reduction: float = Field(default=0.1, gt=0, lt=1)

    model_config = {"extra": "forbid"}


class SolverConfig(BaseModel):
    method: SolverMethod = SolverMethod.MULTISCALE
    basis_variant: BasisVariant = BasisVariant.B4
    restriction: RestrictionKind = RestrictionKind.FE
    correction: CorrectionVariant = CorrectionVariant.NONE
    smoothing_steps: int = Field(default=5, ge=0)
    nonlinear_tol: float = Field(default=1e-6, gt=0)
    # absolute target on the volume scaled residual when the model is linear
    linear_model_tol: float = Field(default=1e-10, gt=0)
    max_outer: int = Field(default=500, ge=1)
    max_inner: int = Field(default=200, ge=1)
    coarsening: CoarseningRatio = Field(default_factory=CoarseningRatio)
    adaptivity: AdaptivityPolicy = Field(default_factory=AdaptivityPolicy)
    c_evaluation: AccumulationEvaluation = AccumulationEvaluation.CURRENT
    final_fv_sweep: bool = False
    track_inner_error: bool = False
    label: Optional[str] = None

    model_config = {"extra": "forbid"}

    @property
    def linear_reduction(self) -> float:
        return self.adaptivity.linear_reduction

    @property
    def config_id(self) -> str:
        if self.label:
            return self.label
        if self.method is SolverMethod.MULTISCALE:
            parts = [
                self.basis_variant.value,
                self.restriction.value,
                self.correction.value,
                f"ilu{self.smoothing_steps}",
                self.coarsening.label(),
            ]
            return "-".join(parts)
        return self.method.value


class TimeSchedule(BaseModel):
    times: List[float] = Field(default_factory=lambda: [0.4, 1.0, 2.0])

    model_config = {"extra": "forbid"}

    @field_validator("times")
    @classmethod
    def strictly_increasing(cls, v):
        if not v:
            raise ValueError("schedule needs at least one target time")
        if v[0] <= 0:
            raise ValueError("target times must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("target times must be strictly increasing")
        return v

    def windows(self) -> List[Tuple[float, float]]:
        starts = [0.0] + list(self.times[:-1])
        return list(zip(starts, self.times))
