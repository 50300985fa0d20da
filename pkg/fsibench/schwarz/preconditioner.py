"""
One- and two-level additive overlapping Schwarz preconditioners.

The two-level operator is

    M^-1 r = phi K0^-1 phi^T r + sum_i R_i^T K_i^-1 R_i r

with local matrices ``K_i = R_i K R_i^T`` on the overlapping DoF sets.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import (
    DenseFactorization,
    DimensionMismatch,
    SingularMatrixError,
    SparseMatrix,
    dense_lu_factor,
)
from fsibench.partition import restrict_matrix
from fsibench.utils.log import logger

from .coarse import CoarseBasis, build_coarse_basis
from .exceptions import SubdomainSolveError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from fsibench.partition import Decomposition

log = logger(__name__)


@dataclass(frozen=True, eq=False)
class SchwarzPreconditioner:
    """Factorized subdomain (and coarse) problems, reusable across GMRES iterations."""

    levels: int
    decomp: Decomposition
    local_facts: tuple[DenseFactorization, ...]
    coarse: CoarseBasis | None = None

    def __post_init__(self) -> None:
        if self.levels not in (1, 2):
            raise ValueError(f"Schwarz levels must be 1 or 2, got {self.levels}")
        if self.levels == 2 and self.coarse is None:
            raise ValueError("A two-level preconditioner needs a coarse basis")
        if len(self.local_facts) != self.decomp.n_subdomains:
            raise ValueError(
                f"{len(self.local_facts)} local factorizations for "
                f"{self.decomp.n_subdomains} subdomains"
            )

    @property
    def n_dofs(self) -> int:
        return self.decomp.n_dofs

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        return apply_schwarz(self, r)


def build_schwarz(
    K: SparseMatrix,
    decomp: Decomposition,
    levels: int = 2,
    coarse_kind: str = "gdsw",
    nullspace: NDArray[np.float64] | None = None,
    coarse: CoarseBasis | None = None,
) -> SchwarzPreconditioner:
    """Factorize every overlapping subdomain matrix and, for two levels, the coarse
    problem.

    :param coarse: a prebuilt coarse basis, used instead of ``coarse_kind``
    :raises SubdomainSolveError: if a subdomain matrix is singular
    """

    if K.shape != (decomp.n_dofs, decomp.n_dofs):
        raise DimensionMismatch(decomp.n_dofs, K.shape[0])
    start = time.perf_counter()
    facts = []
    for i in range(decomp.n_subdomains):
        try:
            facts.append(dense_lu_factor(restrict_matrix(K, decomp, i)))
        except SingularMatrixError as exc:
            raise SubdomainSolveError(i) from exc
    if levels == 2 and coarse is None:
        coarse = build_coarse_basis(K, decomp, coarse_kind, nullspace)
    log.info(
        "Schwarz setup (%d levels, %d subdomains) in %.4f s",
        levels,
        decomp.n_subdomains,
        time.perf_counter() - start,
    )
    return SchwarzPreconditioner(
        levels=levels,
        decomp=decomp,
        local_facts=tuple(facts),
        coarse=coarse if levels == 2 else None,
    )


def apply_schwarz(M: SchwarzPreconditioner, r: ArrayLike) -> NDArray[np.float64]:
    """Additive application, summing subdomains in increasing order."""

    residual = np.asarray(r, dtype=float)
    if residual.shape != (M.n_dofs,):
        raise DimensionMismatch(M.n_dofs, residual.size)
    z = np.zeros(M.n_dofs)
    for dofs, fact in zip(M.decomp.overlapping_dofs, M.local_facts):
        z[dofs] += fact.solve(residual[dofs])
    if M.coarse is not None:
        z += M.coarse.apply(residual)
    return z
