"""
Monolithic two-level Schwarz preconditioner for the velocity-pressure system.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from fsibench.partition import restrict_to_dofs
from fsibench.schwarz import (
    SchwarzPreconditioner,
    apply_schwarz,
    build_schwarz,
    coarse_basis_from_values,
    constant_nullspace,
    interface_values,
    translation_nullspace,
)
from fsibench.utils.log import logger

from .saddle import SaddleBlocks, has_pressure_nullspace, pin_pressure

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from fsibench.linalg import SparseMatrix
    from fsibench.partition import Decomposition

log = logger(__name__)


@dataclass(frozen=True, eq=False)
class MonolithicFluidPreconditioner:
    """Schwarz preconditioner on the coupled ``(u, p)`` matrix.

    :param velocity_columns: coarse columns carried by velocity interface values
    :param pressure_columns: coarse columns carried by pressure interface values
    """

    schwarz: SchwarzPreconditioner
    n_u: int
    velocity_columns: int = 0
    pressure_columns: int = 0

    @property
    def coarse_dim(self) -> int:
        coarse = self.schwarz.coarse
        return 0 if coarse is None else coarse.dim

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        return apply_schwarz(self.schwarz, r)

    def apply(
        self, r_u: ArrayLike, r_p: ArrayLike
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        z = apply_schwarz(self.schwarz, np.concatenate([r_u, r_p]))
        return z[: self.n_u], z[self.n_u :]


def build_monolithic_fluid(
    K: SparseMatrix,
    decomp: Decomposition,
    n_u: int,
    *,
    levels: int = 2,
    coarse_velocity: str = "gdsw",
    coarse_pressure: str = "rgdsw",
    velocity_nullspace: NDArray[np.float64] | None = None,
) -> MonolithicFluidPreconditioner:
    """Two-level Schwarz on the coupled saddle-point matrix.

    The coarse basis concatenates velocity columns (translations on the velocity
    interface, ``coarse_velocity``) and pressure columns (constants on the pressure
    interface, ``coarse_pressure``), extended harmonically with the coupled matrix.

    :param K: coupled matrix, velocity DoFs first
    :param decomp: decomposition of the coupled DoFs
    :raises SubdomainSolveError: if a local saddle-point block is singular
    """

    start = time.perf_counter()
    n = K.shape[0]
    if has_pressure_nullspace(SaddleBlocks.from_matrix(K, n_u)):
        log.info("Pinning pressure DoF 0 of the monolithic fluid preconditioner")
        K = pin_pressure(K, n_u)
        decomp = _with_fixed(decomp, n_u)

    velocity_cols = pressure_cols = 0
    coarse = None
    if levels == 2:
        u_decomp = restrict_to_dofs(decomp, np.arange(n_u))
        p_decomp = restrict_to_dofs(decomp, np.arange(n_u, n))
        u_modes = velocity_nullspace
        if u_modes is None:
            u_modes = translation_nullspace(n_u)
        u_values = interface_values(u_decomp, coarse_velocity, u_modes)
        p_modes = constant_nullspace(n - n_u)
        p_values = interface_values(p_decomp, coarse_pressure, p_modes)
        velocity_cols, pressure_cols = u_values.shape[1], p_values.shape[1]
        phi_gamma = np.zeros((n, velocity_cols + pressure_cols))
        phi_gamma[:n_u, :velocity_cols] = u_values
        phi_gamma[n_u:, velocity_cols:] = p_values
        coarse = coarse_basis_from_values(
            K, decomp, phi_gamma, f"{coarse_velocity}+{coarse_pressure}"
        )
    schwarz = build_schwarz(K, decomp, levels=levels, coarse=coarse)
    log.info(
        "Monolithic fluid setup (%d velocity + %d pressure coarse columns) in %.4f s",
        velocity_cols,
        pressure_cols,
        time.perf_counter() - start,
    )
    return MonolithicFluidPreconditioner(schwarz, n_u, velocity_cols, pressure_cols)


def _with_fixed(decomp: Decomposition, n_u: int) -> Decomposition:
    fixed = np.union1d(decomp.dirichlet_dofs, [n_u])
    return decomp.with_dofs(decomp.element_dofs, decomp.n_dofs, fixed)
