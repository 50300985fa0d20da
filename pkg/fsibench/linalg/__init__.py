"""
Import the linear algebra substrate.
"""
from .blockvec import SEGMENT_NAMES, BlockVector
from .dense import DenseFactorization, dense_lu_factor
from .exceptions import (
    ConstructionError,
    DimensionMismatch,
    IndexSetError,
    MatrixMarketError,
    SingularMatrixError,
)
from .mmio import read_matrix_market, write_matrix_market
from .sparse import (
    SparseMatrix,
    canonical,
    check_index_set,
    csr_from_triplets,
    diagonal,
    identity,
    identity_rows,
    is_canonical,
    place_blocks,
    restriction,
    spmv,
    submatrix,
    zero_rows,
    zeros,
)

__all__ = [
    "SEGMENT_NAMES",
    "BlockVector",
    "DenseFactorization",
    "dense_lu_factor",
    "ConstructionError",
    "DimensionMismatch",
    "IndexSetError",
    "MatrixMarketError",
    "SingularMatrixError",
    "read_matrix_market",
    "write_matrix_market",
    "SparseMatrix",
    "canonical",
    "check_index_set",
    "csr_from_triplets",
    "diagonal",
    "identity",
    "identity_rows",
    "is_canonical",
    "place_blocks",
    "restriction",
    "spmv",
    "submatrix",
    "zero_rows",
    "zeros",
]
