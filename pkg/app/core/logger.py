import logging
from typing import List, Optional

from app.core.config import settings
from app.schemas.solver_event import EventStage, EventType, SolverEvent


class RunLog:
    """In-memory collector of solver events for one run."""

    def __init__(self):
        self.events: List[SolverEvent] = []

    def add(self, event: SolverEvent) -> None:
        self.events.append(event)

    def filter(self, stage: Optional[EventStage] = None, event: Optional[EventType] = None):
        return [
            e
            for e in self.events
            if (stage is None or e.stage == stage) and (event is None or e.event == event)
        ]

    def __len__(self) -> int:
        return len(self.events)


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(level=(level or settings.LOG_LEVEL), format=settings.LOG_FORMAT)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


_events = get_logger("app.events")


def create_log(
    stage: EventStage,
    event: EventType,
    message: str,
    run_log: Optional[RunLog] = None,
    outer: Optional[int] = None,
    inner: Optional[int] = None,
    norm: Optional[float] = None,
    metadata: Optional[dict] = None,
    level: int = logging.DEBUG,
) -> SolverEvent:
    """Create a solver event, collect it and emit it as a JSON line"""
    entry = SolverEvent(
        stage=stage,
        event=event,
        message=message,
        outer=outer,
        inner=inner,
        norm=norm,
        meta=metadata,
    )
    if run_log is not None:
        run_log.add(entry)
    if _events.isEnabledFor(level):
        _events.log(level, entry.model_dump_json(exclude_none=True))
    return entry
