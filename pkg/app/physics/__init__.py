from .model import (
    density,
    porosity,
    accumulation_coeff,
    harmonic_mean,
    face_transmissibility,
    characteristic_time,
)
from .assembly import (
    SimState,
    LinearSystem,
    Problem,
    assemble,
    residual,
    nonlinear_error,
    error_from_system,
    laplacian,
)

__all__ = [
    "density",
    "porosity",
    "accumulation_coeff",
    "harmonic_mean",
    "face_transmissibility",
    "characteristic_time",
    "SimState",
    "LinearSystem",
    "Problem",
    "assemble",
    "residual",
    "nonlinear_error",
    "error_from_system",
    "laplacian",
]
