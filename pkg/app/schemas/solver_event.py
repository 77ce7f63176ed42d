from datetime import datetime, timezone
from enum import Enum
from typing import Optional
from pydantic import BaseModel, Field


class EventStage(str, Enum):
    """Solver stage an event belongs to"""

    ASSEMBLY = "assembly"
    BASIS = "basis"
    COARSE = "coarse"
    SMOOTHING = "smoothing"
    NORM = "norm"
    SCHEDULE = "schedule"
    BENCH = "bench"


class EventType(str, Enum):
    """Kind of solver event"""

    RELINEARIZE = "relinearize"
    INNER = "inner"
    NON_MONOTONE = "non_monotone"
    REFRESH = "refresh"
    CONVERGED = "converged"
    FAILED = "failed"
    STEP = "step"
    RUN = "run"


class SolverEventBase(BaseModel):
    stage: EventStage
    event: EventType
    message: str
    outer: Optional[int] = None
    inner: Optional[int] = None
    norm: Optional[float] = None
    meta: Optional[dict] = None


class SolverEvent(SolverEventBase):
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
