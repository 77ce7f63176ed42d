from .hierarchy import (
    CellCategory,
    PrimalPartition,
    DualPartition,
    GridHierarchy,
    build_primal,
    build_dual,
    build_hierarchy,
    wirebasket_permutation,
    cell_coordinates,
)

__all__ = [
    "CellCategory",
    "PrimalPartition",
    "DualPartition",
    "GridHierarchy",
    "build_primal",
    "build_dual",
    "build_hierarchy",
    "wirebasket_permutation",
    "cell_coordinates",
]
