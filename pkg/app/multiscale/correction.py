from typing import Optional

import numpy as np

from app.multiscale.wirebasket import WirebasketSolver
from app.schemas.solver import CorrectionVariant


def build_correction(
    variant: CorrectionVariant, rhs: np.ndarray, solver: Optional[WirebasketSolver]
) -> np.ndarray:
    """Psi = union of local solves carrying ``rhs``; zero at coarse nodes.

    ``solver`` must hold the local factors of the variant's operator.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    if variant == CorrectionVariant.NONE or solver is None:
        return np.zeros_like(rhs)
    if not np.any(rhs):
        return np.zeros_like(rhs)
    return solver.apply(rhs)
