# Pydantic schemas
from .grid import FineGrid, CoarseningRatio, GridConfig
from .field import FieldSpec, FieldConfig, PERMEABILITY_SETS
from .physics import (
    FluidModel,
    RockModel,
    ReferenceScales,
    FluidConfig,
    FaceName,
    LineSource,
    BoundarySpec,
)
from .solver import (
    BasisVariant,
    RestrictionKind,
    CorrectionVariant,
    AccumulationEvaluation,
    SolverMethod,
    AdaptivityPolicy,
    SolverConfig,
    TimeSchedule,
)
from .report import StageTimes, InnerRecord, ConvergenceReport, RunReport
from .experiment import (
    SweepKind,
    SweepConfig,
    ExperimentConfig,
    ExperimentCase,
    ExperimentSpec,
    StepSummary,
    ConfigSummary,
    EnsembleSummary,
    SweepEntry,
    SweepTable,
)
from .run_config import RunConfigFile
from .solver_event import SolverEvent, EventStage, EventType

__all__ = [
    "FineGrid",
    "CoarseningRatio",
    "GridConfig",
    "FieldSpec",
    "FieldConfig",
    "PERMEABILITY_SETS",
    "FluidModel",
    "RockModel",
    "ReferenceScales",
    "FluidConfig",
    "FaceName",
    "LineSource",
    "BoundarySpec",
    "BasisVariant",
    "RestrictionKind",
    "CorrectionVariant",
    "AccumulationEvaluation",
    "SolverMethod",
    "AdaptivityPolicy",
    "SolverConfig",
    "TimeSchedule",
    "StageTimes",
    "InnerRecord",
    "ConvergenceReport",
    "RunReport",
    "SweepKind",
    "SweepConfig",
    "ExperimentConfig",
    "ExperimentCase",
    "ExperimentSpec",
    "StepSummary",
    "ConfigSummary",
    "EnsembleSummary",
    "SweepEntry",
    "SweepTable",
    "RunConfigFile",
    "SolverEvent",
    "EventStage",
    "EventType",
]
