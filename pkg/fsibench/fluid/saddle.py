"""
Velocity-pressure saddle-point blocks.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from fsibench.linalg import SparseMatrix, identity_rows, place_blocks, submatrix

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.fem import BlockSystem


class SaddleBlocks(NamedTuple):
    """The system ``[F Bt; B C]`` (``C`` is zero for Taylor-Hood elements)."""

    F: SparseMatrix
    Bt: SparseMatrix
    B: SparseMatrix
    C: SparseMatrix

    @property
    def n_u(self) -> int:
        return int(self.F.shape[0])

    @property
    def n_p(self) -> int:
        return int(self.C.shape[0])

    def matrix(self) -> SparseMatrix:
        n_u, n = self.n_u, self.n_u + self.n_p
        return place_blocks(
            [(self.F, 0, 0), (self.Bt, 0, n_u), (self.B, n_u, 0), (self.C, n_u, n_u)],
            n,
            n,
        )

    @classmethod
    def from_system(cls, system: BlockSystem) -> SaddleBlocks:
        return cls(system["F_uu"], system["F_up"], system["F_pu"], system["F_pp"])

    @classmethod
    def from_matrix(cls, K: SparseMatrix, n_u: int) -> SaddleBlocks:
        """Split a coupled matrix whose first ``n_u`` unknowns are velocities."""

        u = np.arange(n_u)
        p = np.arange(n_u, K.shape[0])
        return cls(
            submatrix(K, u, u),
            submatrix(K, u, p),
            submatrix(K, p, u),
            submatrix(K, p, p),
        )


def has_pressure_nullspace(blocks: SaddleBlocks, tol: float = 1e-12) -> bool:
    """Whether constant pressures lie in the kernel (enclosed flow)."""

    if blocks.n_p == 0:
        return False
    ones = np.ones(blocks.n_p)
    row_sums = np.asarray(abs(blocks.Bt).sum(axis=1)).ravel()
    scale = max(float(row_sums.max(initial=0.0)), 1.0)
    gradient: NDArray[np.float64] = blocks.Bt @ ones
    pressure: NDArray[np.float64] = blocks.C @ ones
    return bool(
        np.abs(gradient).max(initial=0.0) <= tol * scale
        and np.abs(pressure).max(initial=0.0) <= tol * scale
    )


def pin_pressure(K: SparseMatrix, n_u: int, dof: int = 0) -> SparseMatrix:
    """Replace the row of pressure DoF ``dof`` by an identity row."""

    if not 0 <= dof < K.shape[0] - n_u:
        raise ValueError(f"Pressure DoF {dof} out of range")
    return identity_rows(K, np.array([n_u + dof]))
