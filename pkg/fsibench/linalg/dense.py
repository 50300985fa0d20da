"""
Dense LU factorization with partial pivoting.

Subdomain matrices, coarse matrices and the exact-inverse oracles are small enough at
desk scale to factorize densely.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .exceptions import DimensionMismatch, SingularMatrixError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray


@dataclass(frozen=True, eq=False)
class DenseFactorization:
    """PA = LU factors of a square matrix, as returned by LAPACK getrf."""

    n: int
    lu: NDArray[np.float64]
    pivots: NDArray[np.int32]

    def solve(self, b: ArrayLike) -> NDArray[np.float64]:
        """Solve ``A x = b`` for a vector or a block of column vectors."""

        rhs = np.asarray(b, dtype=float)
        if rhs.shape[0] != self.n:
            raise DimensionMismatch(self.n, rhs.shape[0])
        if self.n == 0:
            return np.zeros_like(rhs)
        result: NDArray[np.float64] = scipy.linalg.lu_solve(
            (self.lu, self.pivots), rhs, check_finite=False
        )
        return result

    def __call__(self, b: ArrayLike) -> NDArray[np.float64]:
        return self.solve(b)


def dense_lu_factor(A: ArrayLike | sp.spmatrix) -> DenseFactorization:
    """Factorize a square matrix.

    :raises SingularMatrixError: if a pivot is exactly zero after pivoting
    """

    if sp.issparse(A):
        matrix = np.asarray(A.toarray(), dtype=float)  # type: ignore[union-attr]
    else:
        matrix = np.array(A, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Matrix must be square, got shape {matrix.shape}")
    n = matrix.shape[0]
    if n == 0:
        return DenseFactorization(0, matrix, np.zeros(0, dtype=np.int32))

    with warnings.catch_warnings():
        # getrf reports exact singularity through a warning; we raise instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(matrix, check_finite=True)

    zero_pivots = np.flatnonzero(np.diag(lu) == 0.0)
    if zero_pivots.size:
        raise SingularMatrixError(int(zero_pivots[0]))
    return DenseFactorization(n, lu, piv)
