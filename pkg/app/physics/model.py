"""Pointwise constitutive relations of the nondimensional flow model."""
from typing import Union

import numpy as np

from app.core.errors import StateError
from app.schemas.physics import FluidModel, ReferenceScales, RockModel

ArrayLike = Union[float, np.ndarray]


def density(p: ArrayLike, fluid: FluidModel) -> ArrayLike:
    """rho* = 1 + eta p*."""
    rho = 1.0 + fluid.eta * np.asarray(p, dtype=np.float64)
    if np.any(rho <= 0):
        bad = np.flatnonzero(np.atleast_1d(rho) <= 0)
        raise StateError(f"non-positive density at {bad.size} cell(s), first at cell {int(bad[0])}")
    return float(rho) if rho.ndim == 0 else rho


def porosity(p: ArrayLike, rock: RockModel) -> ArrayLike:
    phi = rock.porosity + rock.dphi_dp * np.asarray(p, dtype=np.float64)
    return float(phi) if phi.ndim == 0 else phi


def accumulation_coeff(
    p_n: ArrayLike, p_eval: ArrayLike, dt: float, fluid: FluidModel, rock: RockModel
) -> ArrayLike:
    """c = (dphi/dp + phi^n rho^n eta / rho^2) / dt with rho taken at p_eval.

    Pass p_eval = p^nu for c^nu and p_eval = p^n for c^n.
    """
    if dt <= 0:
        raise ValueError("time step must be positive")
    rho_n = density(p_n, fluid)
    rho = density(p_eval, fluid)
    phi_n = porosity(p_n, rock)
    return (rock.dphi_dp + phi_n * rho_n * fluid.eta / rho**2) / dt


def harmonic_mean(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    total = a + b
    out = np.divide(2.0 * a * b, total, out=np.zeros(np.broadcast(a, b).shape), where=total > 0)
    return float(out) if out.ndim == 0 else out


def face_transmissibility(
    k_i: ArrayLike,
    k_j: ArrayLike,
    fluid: FluidModel,
    area: float = 1.0,
    distance: float = 1.0,
    rho_i: ArrayLike = 1.0,
    rho_j: ArrayLike = 1.0,
    scale: float = 1.0,
) -> ArrayLike:
    """Two-point transmissibility with harmonic mobility and arithmetic face density."""
    lam = harmonic_mean(np.asarray(k_i) / fluid.mu, np.asarray(k_j) / fluid.mu)
    rho_face = 0.5 * (np.asarray(rho_i) + np.asarray(rho_j))
    t = scale * (area / distance) * lam * rho_face
    return float(t) if np.ndim(t) == 0 else t


def characteristic_time(fluid: FluidModel, rock: RockModel, reference: ReferenceScales, length: float) -> float:
    """tau = mu phi L^2 / (K_ref dp)."""
    return fluid.mu * rock.porosity * length**2 / (reference.k_ref * reference.delta_p)
