from enum import Enum
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field

from app.schemas.field import FieldConfig
from app.schemas.grid import GridConfig
from app.schemas.physics import BoundarySpec, FluidConfig
from app.schemas.report import StageTimes
from app.schemas.solver import SolverConfig, TimeSchedule


class SweepKind(str, Enum):
    NONE = "none"
    BASIS = "basis"
    CORRECTION = "correction"
    SMOOTHING = "smoothing"
    COARSENING = "coarsening"
    VARIANCE = "variance"
    ASPECT_RATIO = "aspect_ratio"


class SweepConfig(BaseModel):
    kind: SweepKind = SweepKind.NONE
    values: List[Any] = Field(default_factory=list)

    model_config = {"extra": "forbid"}


class ExperimentConfig(BaseModel):
    """Experiment section of a run configuration."""

    name: str = "experiment"
    n_realizations: int = Field(default=5, ge=1)
    seed: int = 0
    jobs: int = Field(default=1, ge=1)
    output_dir: str = "results"
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    # explicit solver overrides compared side by side, each a partial SolverConfig
    variants: List[Dict[str, Any]] = Field(default_factory=list)

    model_config = {"extra": "forbid"}


class ExperimentCase(BaseModel):
    config_id: str
    solver: SolverConfig
    grid: GridConfig
    field: FieldConfig


class ExperimentSpec(BaseModel):
    name: str
    cases: List[ExperimentCase] = Field(min_length=1)
    n_realizations: int = Field(default=5, ge=1)
    seed: int = 0
    schedule: TimeSchedule = Field(default_factory=TimeSchedule)
    fluid: FluidConfig = Field(default_factory=FluidConfig)
    boundary: BoundarySpec = Field(default_factory=BoundarySpec)
    output_dir: str = "results"
    jobs: int = Field(default=1, ge=1)


class StepSummary(BaseModel):
    """Statistics of one time window; timings over successful runs only."""

    step: int
    t_start: float
    t_end: float
    runs: int
    successes: int
    mean_outer: Optional[float] = None
    mean_inner: Optional[float] = None
    mean_seconds: Optional[StageTimes] = None
    std_seconds: Optional[StageTimes] = None
    mean_total: Optional[float] = None
    std_total: Optional[float] = None


class ConfigSummary(BaseModel):
    config_id: str
    runs: int
    successes: int
    success_rate: float = Field(ge=0, le=100)
    mean_outer: Optional[float] = None
    mean_inner: Optional[float] = None
    mean_seconds: Optional[StageTimes] = None
    mean_total: Optional[float] = None
    std_total: Optional[float] = None
    steps: List[StepSummary]


class EnsembleSummary(BaseModel):
    experiment: str
    configs: List[ConfigSummary]
    # config id with the smallest mean total time among configs with a success
    fastest: Optional[str] = None

    def by_id(self, config_id: str) -> ConfigSummary:
        for item in self.configs:
            if item.config_id == config_id:
                return item
        raise KeyError(config_id)


class SweepEntry(BaseModel):
    value: str
    summary: EnsembleSummary


class SweepTable(BaseModel):
    kind: SweepKind
    entries: List[SweepEntry]
    # sweep value whose fastest config has the lowest mean total time
    best: Optional[str] = None

    def by_value(self, value: str) -> EnsembleSummary:
        for entry in self.entries:
            if entry.value == value:
                return entry.summary
        raise KeyError(value)
