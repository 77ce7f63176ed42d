from .sparse import (
    SparseMatrix,
    as_csr,
    from_triplets,
    identity,
    diagonal,
    to_dense,
    check_structure,
    spmv,
    same_pattern,
    write_matrix_market,
    read_matrix_market,
)
from .lu import SparseLuFactors, sparse_lu_factor
from .ilu import Ilu0Factors, ilu0_factor, ilu0_smooth
from .norms import norm2, norm_inf

__all__ = [
    "SparseMatrix",
    "as_csr",
    "from_triplets",
    "identity",
    "diagonal",
    "to_dense",
    "check_structure",
    "spmv",
    "same_pattern",
    "write_matrix_market",
    "read_matrix_market",
    "SparseLuFactors",
    "sparse_lu_factor",
    "Ilu0Factors",
    "ilu0_factor",
    "ilu0_smooth",
    "norm2",
    "norm_inf",
]
