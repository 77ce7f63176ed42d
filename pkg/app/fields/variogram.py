from typing import Sequence, Tuple, Union

import numpy as np

from app.fields.generator import PermeabilityField

AXES = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


def _step_vector(direction: Union[str, Sequence[int]]) -> Tuple[int, int, int]:
    if isinstance(direction, str):
        return AXES[direction]
    step = tuple(int(s) for s in direction)
    if len(step) != 3 or not any(step):
        raise ValueError(f"invalid lag direction {direction!r}")
    return step


def _shifted_pair(z: np.ndarray, shift: Tuple[int, int, int]):
    # z is (nz, ny, nx); shift is (sx, sy, sz)
    head, tail = [], []
    for s, n in zip(reversed(shift), z.shape):
        if s >= 0:
            head.append(slice(s, n))
            tail.append(slice(0, n - s))
        else:
            head.append(slice(0, n + s))
            tail.append(slice(-s, n))
    return z[tuple(head)], z[tuple(tail)]


def max_lag(dims: Tuple[int, int, int], step: Tuple[int, int, int]) -> int:
    limits = [(n // 2) // abs(s) for n, s in zip(dims, step) if s]
    return max(1, min(limits))


def empirical_variogram(
    field: PermeabilityField, direction: Union[str, Sequence[int]] = "x", n_lags: int = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Semivariogram of ln k along an axis or an integer step vector.

    Returns lag distances in cell units and gamma, both starting at lag 0.
    """
    step = _step_vector(direction)
    z = field.log()
    n_lags = n_lags or max_lag(field.dims, step)
    gamma = np.zeros(n_lags + 1)
    for h in range(1, n_lags + 1):
        a, b = _shifted_pair(z, tuple(h * s for s in step))
        if a.size == 0:
            gamma = gamma[:h]
            break
        gamma[h] = 0.5 * np.mean((a - b) ** 2)
    lags = np.arange(gamma.size) * float(np.linalg.norm(step))
    return lags, gamma


def estimate_range(
    field: PermeabilityField, direction: Union[str, Sequence[int]] = "x", sill_fraction: float = 0.95
) -> float:
    """Lag at which the variogram first reaches a fraction of the sample variance."""
    lags, gamma = empirical_variogram(field, direction)
    sill = float(np.var(field.log()))
    if sill == 0.0:
        return 0.0
    target = sill_fraction * sill
    above = np.flatnonzero(gamma >= target)
    if above.size == 0:
        return float(lags[-1])
    h = above[0]
    g0, g1 = gamma[h - 1], gamma[h]
    frac = (target - g0) / (g1 - g0) if g1 > g0 else 1.0
    return float(lags[h - 1] + frac * (lags[h] - lags[h - 1]))
