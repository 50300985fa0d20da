"""
Scatter element arrays into global sparse matrices and vectors.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import SparseMatrix, csr_from_triplets

if TYPE_CHECKING:
    from numpy.typing import NDArray


def scatter_matrix(
    local: NDArray[np.float64],
    row_dofs: NDArray[np.int64],
    col_dofs: NDArray[np.int64],
    nrows: int,
    ncols: int,
) -> SparseMatrix:
    """Sum element matrices ``local[e, i, j]`` into a global CSR matrix."""

    n_el, n_i, n_j = local.shape
    rows = np.broadcast_to(row_dofs[:, :, None], (n_el, n_i, n_j))
    cols = np.broadcast_to(col_dofs[:, None, :], (n_el, n_i, n_j))
    return csr_from_triplets(
        None, nrows, ncols, rows=rows.ravel(), cols=cols.ravel(), values=local.ravel()
    )


def scatter_vector(
    local: NDArray[np.float64], dofs: NDArray[np.int64], n: int
) -> NDArray[np.float64]:
    """Sum element vectors ``local[e, i]`` into a global vector in element order."""

    out = np.zeros(n)
    np.add.at(out, dofs.ravel(), local.ravel())
    return out


def gather(
    values: NDArray[np.float64], dofs: NDArray[np.int64], n_components: int
) -> NDArray[np.float64]:
    """Element nodal values, shape (elements, nodes, components)."""

    local = values[dofs]
    return local.reshape(dofs.shape[0], -1, n_components)
