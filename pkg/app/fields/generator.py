"""Log-normal permeability by FFT circulant embedding of a spherical covariance."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.fft

from app.core.errors import DimensionError, FieldValidationError
from app.core.logger import get_logger
from app.schemas.field import FieldSpec
from app.schemas.grid import FineGrid

logger = get_logger(__name__)


@dataclass
class PermeabilityField:
    k: np.ndarray
    dims: Tuple[int, int, int]
    spec: Optional[FieldSpec] = None

    def __post_init__(self):
        self.k = np.ascontiguousarray(self.k, dtype=np.float64).ravel()
        if self.k.size != int(np.prod(self.dims)):
            raise DimensionError(f"{self.k.size} values for a {self.dims} grid")
        if not np.all(np.isfinite(self.k)) or np.any(self.k <= 0):
            raise FieldValidationError("permeability must be finite and strictly positive")

    @property
    def n_cells(self) -> int:
        return self.k.size

    def as_array(self) -> np.ndarray:
        nx, ny, nz = self.dims
        return self.k.reshape((nz, ny, nx))

    def log(self) -> np.ndarray:
        return np.log(self.as_array())

    def check_grid(self, grid: FineGrid) -> None:
        if tuple(self.dims) != grid.dims:
            raise DimensionError(f"field of dims {self.dims} does not fit grid {grid.dims}")


def spherical_covariance(r: np.ndarray, variance: float) -> np.ndarray:
    r = np.minimum(r, 1.0)
    return variance * (1.0 - 1.5 * r + 0.5 * r**3)


def _ranges(spec: FieldSpec) -> np.ndarray:
    # principal direction measured against y, second against x, third is z
    lengths = np.array([spec.psi[0] * spec.ny, spec.psi[1] * spec.nx, spec.psi[2] * spec.nz])
    return np.maximum(lengths, 1e-9)


def _embedding_size(spec: FieldSpec, ranges: np.ndarray) -> Tuple[int, int, int]:
    theta = np.deg2rad(spec.orientation_deg)
    # half width of the rotated correlation ellipsoid along each axis
    reach_x = np.hypot(ranges[0] * np.sin(theta), ranges[1] * np.cos(theta))
    reach_y = np.hypot(ranges[0] * np.cos(theta), ranges[1] * np.sin(theta))
    reach_z = ranges[2]
    sizes = []
    for n, reach in zip(spec.dims, (reach_x, reach_y, reach_z)):
        target = max(2 * n, n + int(np.ceil(reach)) + 1)
        sizes.append(scipy.fft.next_fast_len(target))
    return tuple(sizes)


def covariance_eigenvalues(spec: FieldSpec) -> np.ndarray:
    """Eigenvalues of the embedding circulant, shaped (mz, my, mx)."""
    ranges = _ranges(spec)
    mx, my, mz = _embedding_size(spec, ranges)
    lags = []
    for m in (mx, my, mz):
        d = np.arange(m, dtype=np.float64)
        lags.append(np.where(d <= m // 2, d, d - m))
    hz = lags[2][:, None, None]
    hy = lags[1][None, :, None]
    hx = lags[0][None, None, :]

    theta = np.deg2rad(spec.orientation_deg)
    u1 = hx * np.sin(theta) + hy * np.cos(theta)
    u2 = hx * np.cos(theta) - hy * np.sin(theta)
    r = np.sqrt((u1 / ranges[0]) ** 2 + (u2 / ranges[1]) ** 2 + (hz / ranges[2]) ** 2)
    cov = spherical_covariance(r, spec.var_lnk)

    lam = np.real(scipy.fft.fftn(cov))
    negative = lam < 0
    if np.any(negative):
        total = lam.sum()
        lam[negative] = 0.0
        clipped = lam.sum()
        logger.debug(
            "clipped %d negative circulant eigenvalues (%.3e of trace)",
            int(negative.sum()),
            (clipped - total) / max(total, 1e-300),
        )
        if clipped > 0:
            lam *= total / clipped
    return lam


def generate(spec: FieldSpec) -> PermeabilityField:
    """Stationary Gaussian ln k with spherical covariance, exponentiated."""
    if spec.var_lnk == 0:
        k = np.full(spec.nx * spec.ny * spec.nz, np.exp(spec.mean_lnk))
        return PermeabilityField(k=k, dims=spec.dims, spec=spec)

    lam = covariance_eigenvalues(spec)
    rng = np.random.default_rng(spec.seed)
    white = rng.standard_normal(lam.shape)
    z = np.real(scipy.fft.ifftn(np.sqrt(lam) * scipy.fft.fftn(white)))
    z = z[: spec.nz, : spec.ny, : spec.nx]
    k = np.exp(spec.mean_lnk + z)
    return PermeabilityField(k=k.ravel(), dims=spec.dims, spec=spec)
