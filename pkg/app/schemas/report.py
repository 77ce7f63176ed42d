from typing import Dict, List, Optional
from pydantic import BaseModel, Field

STAGES = ("assembly", "basis", "coarse", "smoothing", "norm")


class StageTimes(BaseModel):
    assembly: float = 0.0
    basis: float = 0.0
    coarse: float = 0.0
    smoothing: float = 0.0
    norm: float = 0.0

    @property
    def total(self) -> float:
        return self.assembly + self.basis + self.coarse + self.smoothing + self.norm

    def rounded(self, digits: int = 6) -> "StageTimes":
        return StageTimes(**{k: round(v, digits) for k, v in self.model_dump().items()})


class InnerRecord(BaseModel):
    outer: int
    inner: int
    residual: float
    # max norm of the restricted residual right after the multiscale stage
    coarse_residual: Optional[float] = None
    error: Optional[float] = None


class ConvergenceReport(BaseModel):
    method: str = "multiscale"
    t_start: float = 0.0
    t_end: float = 0.0
    outer_iterations: int = 0
    inner_iterations: int = 0
    stage_seconds: StageTimes = Field(default_factory=StageTimes)
    # ||eps||_2 at every relinearization point, entry included
    error_history: List[float] = Field(default_factory=list)
    inner_log: List[InnerRecord] = Field(default_factory=list)
    local_solves: int = 0
    # nonlinear error after the optional closing finite-volume sweep
    conservative_sweep_error: Optional[float] = None
    refreshed_blocks: int = 0
    success: bool = False
    failure_stage: Optional[str] = None
    message: Optional[str] = None

    @property
    def final_error(self) -> Optional[float]:
        return self.error_history[-1] if self.error_history else None

    @property
    def residual_history(self) -> List[float]:
        return [rec.residual for rec in self.inner_log]


class RunReport(BaseModel):
    """Everything ``run`` writes for a schedule."""

    config: Dict
    steps: List[ConvergenceReport]
    success: bool
