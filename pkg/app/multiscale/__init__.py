from .restriction import build_restriction, build_restriction_fv, build_restriction_fe
from .wirebasket import WirebasketSolver, LocalGroup, reduce_operator, PHASES
from .basis import variant_operator, build_basis
from .correction import build_correction
from .adaptivity import changed_rows, mark_dirty
from .operators import MultiscaleOperators, ms_apply, refresh

__all__ = [
    "build_restriction",
    "build_restriction_fv",
    "build_restriction_fe",
    "WirebasketSolver",
    "LocalGroup",
    "reduce_operator",
    "PHASES",
    "variant_operator",
    "build_basis",
    "build_correction",
    "changed_rows",
    "mark_dirty",
    "MultiscaleOperators",
    "ms_apply",
    "refresh",
]
