"""
Matrix Market coordinate import and export.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import scipy.io
import scipy.sparse as sp

from .exceptions import MatrixMarketError
from .sparse import SparseMatrix, canonical

if TYPE_CHECKING:
    from pathlib import Path


def write_matrix_market(path: Path | str, A: SparseMatrix, comment: str = "") -> None:
    """Write a sparse matrix as an ASCII coordinate file (1-based indices)."""

    try:
        scipy.io.mmwrite(
            str(path), sp.coo_matrix(A), comment=comment, field="real", precision=17
        )
    except OSError as exc:
        raise MatrixMarketError(f"Could not write {path}: {exc}") from exc


def read_matrix_market(path: Path | str) -> SparseMatrix:
    """Read a coordinate Matrix Market file into canonical CSR."""

    try:
        data = scipy.io.mmread(str(path))
    except (OSError, ValueError) as exc:
        raise MatrixMarketError(f"Could not read {path}: {exc}") from exc
    if not sp.issparse(data):
        data = sp.csr_matrix(data)
    return canonical(data)
