from typing import Optional, Sequence


def convergence_monitor(history: Sequence[float], reduction: float) -> Optional[int]:
    """First inner iteration whose residual fell below ``reduction`` times the initial one."""
    if not history:
        raise ValueError("residual history is empty")
    r0 = history[0]
    for i, value in enumerate(history):
        if r0 == 0 or value / r0 < reduction:
            return i
    return None
