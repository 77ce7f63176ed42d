from pydantic import BaseModel, Field

from app.schemas.experiment import ExperimentConfig
from app.schemas.field import FieldConfig
from app.schemas.grid import GridConfig
from app.schemas.physics import BoundarySpec, FluidConfig
from app.schemas.solver import SolverConfig, TimeSchedule


class RunConfigFile(BaseModel):
    grid: GridConfig = Field(default_factory=GridConfig)
    field: FieldConfig = Field(default_factory=FieldConfig)
    fluid: FluidConfig = Field(default_factory=FluidConfig)
    boundary: BoundarySpec = Field(default_factory=BoundarySpec)
    schedule: TimeSchedule = Field(default_factory=TimeSchedule)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)

    model_config = {"extra": "forbid"}
