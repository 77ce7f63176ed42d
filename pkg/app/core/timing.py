import time
from contextlib import contextmanager

from app.schemas.report import StageTimes


class StageTimer:
    """Accumulates monotonic wall time per solver stage."""

    def __init__(self):
        self.times = StageTimes()

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            setattr(self.times, name, getattr(self.times, name) + elapsed)

    def snapshot(self) -> StageTimes:
        return self.times.model_copy()
