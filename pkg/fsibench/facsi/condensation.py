"""
Static condensation of the fluid-interface system.

With a Boolean ``C1`` the interface rows fix the velocity interface values
``x_G = r_lam`` directly. The remaining fluid unknowns solve
``F_II x_I = r_I - F_IG x_G`` and the multiplier follows from the interface momentum
rows ``C3_G lam = r_G - F_GI x_I - F_GG x_G``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import (
    DenseFactorization,
    SingularMatrixError,
    SparseMatrix,
    dense_lu_factor,
    submatrix,
)

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.fem import BlockSystem


@dataclass(frozen=True, eq=False)
class FluidSplit:
    """Interior and interface DoFs of the flat ``(u, p)`` fluid vector.

    :param gamma: fluid DoF selected by each interface row of ``C1``, increasing
    :param interior: every other fluid DoF
    """

    n_u: int
    n_p: int
    gamma: NDArray[np.int64]
    interior: NDArray[np.int64]

    @property
    def n_interior_velocity(self) -> int:
        return int(np.count_nonzero(self.interior < self.n_u))

    @classmethod
    def from_system(cls, system: BlockSystem) -> FluidSplit:
        """Read the interface DoFs off ``C1``.

        :raises ValueError: if ``C1`` is not a Boolean row selection in increasing
            column order
        """

        n_u = system.layout["fluid_velocity"]
        n_p = system.layout["fluid_pressure"]
        C1 = system["C1"].tocsr()
        counts = np.diff(C1.indptr)
        if C1.shape[0] and (np.any(counts != 1) or np.any(C1.data != 1.0)):
            raise ValueError("C1 must select exactly one velocity DoF per row")
        gamma = C1.indices.astype(np.int64)
        if np.any(np.diff(gamma) <= 0):
            raise ValueError("C1 must select velocity DoFs in increasing order")
        interior = np.setdiff1d(np.arange(n_u + n_p), gamma)
        return cls(n_u=n_u, n_p=n_p, gamma=gamma, interior=interior)


@dataclass(frozen=True, eq=False)
class CondensedFluid:
    """Fluid blocks split into interior and interface parts, plus the couplings
    FaCSI needs to invert its fluid factor."""

    split: FluidSplit
    F_II: SparseMatrix
    F_IG: SparseMatrix
    F_GI: SparseMatrix
    F_GG: SparseMatrix
    D: SparseMatrix
    C2: SparseMatrix
    C3_gamma: DenseFactorization

    def multiplier(
        self, f: NDArray[np.float64], x_f: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        """Solve the interface momentum rows for the multiplier."""

        gamma, interior = self.split.gamma, self.split.interior
        rhs = f[gamma] - self.F_GI @ x_f[interior] - self.F_GG @ x_f[gamma]
        return self.C3_gamma.solve(rhs)


def condense_fluid(system: BlockSystem) -> CondensedFluid:
    """Split the fluid matrix of ``system`` at the interface DoFs of ``C1``.

    :raises ValueError: if ``C3`` has entries outside the interface rows or its
        interface rows are singular
    """

    split = FluidSplit.from_system(system)
    F = system.fluid_matrix()
    C3 = system["C3"].tocsr()
    n_f = split.n_u + split.n_p
    interior_u = split.interior[split.interior < split.n_u]
    if C3[interior_u].count_nonzero():
        raise ValueError("C3 couples the multiplier to interior velocity rows")
    try:
        C3_gamma = dense_lu_factor(C3[split.gamma])
    except SingularMatrixError as exc:
        raise ValueError("Interface rows of C3 are singular") from exc
    gamma, interior = split.gamma, split.interior
    assert F.shape == (n_f, n_f)
    return CondensedFluid(
        split=split,
        F_II=submatrix(F, interior, interior),
        F_IG=submatrix(F, interior, gamma),
        F_GI=submatrix(F, gamma, interior),
        F_GG=submatrix(F, gamma, gamma),
        D=system["D"],
        C2=system["C2"],
        C3_gamma=C3_gamma,
    )
