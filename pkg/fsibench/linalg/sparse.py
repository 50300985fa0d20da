"""
Compressed-sparse-row operators.

Every operator in the package (global Jacobian blocks, subdomain matrices, coarse
bases) is a canonical ``scipy.sparse.csr_matrix``: sorted column indices within each
row and no duplicate entries. The helpers below build and slice such matrices and
validate the canonical form.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from .exceptions import ConstructionError, DimensionMismatch, IndexSetError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike, NDArray

SparseMatrix = sp.csr_matrix


def canonical(A: sp.spmatrix) -> SparseMatrix:
    """Return A as CSR with summed duplicates and sorted indices."""

    csr = sp.csr_matrix(A, dtype=float, copy=True)
    csr.sum_duplicates()
    csr.sort_indices()
    return csr


def csr_from_triplets(
    triplets: Iterable[tuple[int, int, float]] | None,
    nrows: int,
    ncols: int,
    *,
    rows: ArrayLike | None = None,
    cols: ArrayLike | None = None,
    values: ArrayLike | None = None,
) -> SparseMatrix:
    """Build a canonical CSR matrix, summing duplicate entries.

    Triplets can be given as an iterable of ``(row, col, value)`` or, for assembly
    loops, as three parallel arrays through the keyword arguments.

    :raises ConstructionError: if any index lies outside the matrix
    """

    if nrows < 0 or ncols < 0:
        raise ConstructionError(f"Negative matrix shape ({nrows}, {ncols})")

    if triplets is not None:
        items = list(triplets)
        r = np.array([t[0] for t in items], dtype=np.int64)
        c = np.array([t[1] for t in items], dtype=np.int64)
        v = np.array([t[2] for t in items], dtype=float)
    else:
        r = np.asarray(rows, dtype=np.int64).ravel()
        c = np.asarray(cols, dtype=np.int64).ravel()
        v = np.asarray(values, dtype=float).ravel()
    if not r.size == c.size == v.size:
        raise ConstructionError("Row, column and value arrays differ in length")

    if r.size:
        bad_rows = (r < 0) | (r >= nrows)
        bad_cols = (c < 0) | (c >= ncols)
        if bad_rows.any() or bad_cols.any():
            first = int(np.flatnonzero(bad_rows | bad_cols)[0])
            raise ConstructionError(
                f"Triplet {first} at ({r[first]}, {c[first]}) is outside a "
                f"{nrows}x{ncols} matrix"
            )

    # COO to CSR conversion sums duplicates in input order
    coo = sp.coo_matrix((v, (r, c)), shape=(nrows, ncols))
    return canonical(coo.tocsr())


def zeros(nrows: int, ncols: int) -> SparseMatrix:
    """An all-zero CSR matrix."""

    return sp.csr_matrix((nrows, ncols), dtype=float)


def identity(n: int) -> SparseMatrix:
    """The n x n identity in CSR form."""

    return canonical(sp.identity(n, format="csr"))


def diagonal(values: ArrayLike) -> SparseMatrix:
    """A square diagonal CSR matrix."""

    return canonical(sp.diags(np.asarray(values, dtype=float), format="csr"))


def spmv(A: SparseMatrix, x: ArrayLike) -> NDArray[np.float64]:
    """Return ``A @ x`` (row-by-row accumulation in storage order).

    :raises DimensionMismatch: if ``len(x) != A.shape[1]``
    """

    vec = np.asarray(x, dtype=float)
    if vec.ndim != 1 or vec.shape[0] != A.shape[1]:
        raise DimensionMismatch(A.shape[1], vec.shape[0] if vec.ndim else 0)
    result: NDArray[np.float64] = np.asarray(A @ vec, dtype=float)
    return result


def check_index_set(indices: ArrayLike, bound: int) -> NDArray[np.int64]:
    """Validate a sorted, duplicate-free index set within ``[0, bound)``."""

    idx = np.asarray(indices, dtype=np.int64).ravel()
    if idx.size == 0:
        return idx
    if np.any(np.diff(idx) <= 0):
        raise IndexSetError("Index set must be strictly increasing")
    if idx[0] < 0 or idx[-1] >= bound:
        raise IndexSetError(f"Index set exceeds the range [0, {bound})")
    return idx


def submatrix(A: SparseMatrix, rows: ArrayLike, cols: ArrayLike) -> SparseMatrix:
    """Return ``A(rows, cols)`` with renumbered indices.

    This equals ``R_row A R_col^T`` for the Boolean restriction matrices of the two
    index sets.
    """

    r = check_index_set(rows, A.shape[0])
    c = check_index_set(cols, A.shape[1])
    if r.size == 0 or c.size == 0:
        return zeros(r.size, c.size)
    return canonical(A[r, :][:, c])


def restriction(indices: ArrayLike, n: int) -> SparseMatrix:
    """Boolean restriction matrix selecting ``indices`` out of ``n``."""

    idx = check_index_set(indices, n)
    return csr_from_triplets(
        None,
        idx.size,
        n,
        rows=np.arange(idx.size),
        cols=idx,
        values=np.ones(idx.size),
    )


def is_canonical(A: SparseMatrix) -> bool:
    """Check the CSR invariants: pointer layout, sorted unique in-range columns."""

    ptr = np.asarray(A.indptr)
    idx = np.asarray(A.indices)
    nrows, ncols = A.shape
    if ptr.size != nrows + 1 or ptr[0] != 0 or ptr[-1] != idx.size:
        return False
    if np.any(np.diff(ptr) < 0):
        return False
    if idx.size and (idx.min() < 0 or idx.max() >= ncols):
        return False
    for row in range(nrows):
        cols = idx[ptr[row] : ptr[row + 1]]
        if np.any(np.diff(cols) <= 0):
            return False
    return True


def zero_rows(A: SparseMatrix, rows: ArrayLike) -> SparseMatrix:
    """Return a copy of A with the given rows emptied."""

    idx = np.unique(np.asarray(rows, dtype=np.int64))
    if idx.size == 0:
        return A.copy()
    out = canonical(A)
    for row in idx:
        out.data[out.indptr[row] : out.indptr[row + 1]] = 0.0
    out.eliminate_zeros()
    return out


def identity_rows(A: SparseMatrix, rows: ArrayLike) -> SparseMatrix:
    """Replace the given rows of a square matrix by rows of the identity."""

    idx = np.unique(np.asarray(rows, dtype=np.int64))
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(A.shape[0], A.shape[1])
    n = A.shape[0]
    unit = csr_from_triplets(None, n, n, rows=idx, cols=idx, values=np.ones(idx.size))
    return canonical(zero_rows(A, idx) + unit)


def place_blocks(
    blocks: Iterable[tuple[SparseMatrix, int, int]], nrows: int, ncols: int
) -> SparseMatrix:
    """Sum blocks placed at (row offset, column offset) into one matrix."""

    rows: list[NDArray[np.int64]] = []
    cols: list[NDArray[np.int64]] = []
    vals: list[NDArray[np.float64]] = []
    for block, row0, col0 in blocks:
        coo = sp.coo_matrix(block)
        rows.append(coo.row.astype(np.int64) + row0)
        cols.append(coo.col.astype(np.int64) + col0)
        vals.append(coo.data.astype(float))
    if not rows:
        return zeros(nrows, ncols)
    return csr_from_triplets(
        None,
        nrows,
        ncols,
        rows=np.concatenate(rows),
        cols=np.concatenate(cols),
        values=np.concatenate(vals),
    )
