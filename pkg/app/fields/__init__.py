from .generator import PermeabilityField, generate, spherical_covariance, covariance_eigenvalues
from .variogram import empirical_variogram, estimate_range
from .field_io import load, save

__all__ = [
    "PermeabilityField",
    "generate",
    "spherical_covariance",
    "covariance_eigenvalues",
    "empirical_variogram",
    "estimate_range",
    "load",
    "save",
]
