"""
GDSW-type coarse spaces.

A coarse basis is described by its values on the interface: nullspace vectors
restricted to interface components (GDSW), or spread over the components around each
vertex entity with multiplicity weights (RGDSW). Interior values are the discrete
harmonic extension of those interface values into every subdomain.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from fsibench.linalg import (
    DenseFactorization,
    SingularMatrixError,
    SparseMatrix,
    dense_lu_factor,
    submatrix,
    write_matrix_market,
)
from fsibench.partition import classify_interface
from fsibench.utils.log import logger

from .exceptions import CoarseSpaceError, SubdomainSolveError

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import NDArray

    from fsibench.partition import Decomposition, InterfacePartition

log = logger(__name__)

COARSE_KINDS: tuple[str, ...] = ("gdsw", "rgdsw", "subdomain")

# Relative size below which a restricted nullspace column counts as dependent
RANK_TOLERANCE: float = 1e-10


@dataclass(frozen=True, eq=False)
class CoarseBasis:
    """Coarse basis ``phi`` with the factorized Galerkin matrix ``phi^T K phi``."""

    phi: SparseMatrix
    k0_fact: DenseFactorization
    kind: str

    @property
    def dim(self) -> int:
        return int(self.phi.shape[1])

    def apply(self, r: NDArray[np.float64]) -> NDArray[np.float64]:
        """Coarse correction ``phi K0^-1 phi^T r``."""

        correction: NDArray[np.float64] = self.phi @ self.k0_fact.solve(self.phi.T @ r)
        return correction


def _independent_columns(block: NDArray[np.float64]) -> list[int]:
    """Greedy choice of linearly independent, nonzero columns."""

    scale = max(float(np.abs(block).max(initial=0.0)), 1.0)
    kept: list[int] = []
    for j in range(block.shape[1]):
        if np.abs(block[:, j]).max(initial=0.0) <= RANK_TOLERANCE * scale:
            continue
        candidate = block[:, [*kept, j]]
        if np.linalg.matrix_rank(candidate, tol=RANK_TOLERANCE * scale) > len(kept):
            kept.append(j)
    return kept


def _columns_on(
    dofs: NDArray[np.int64], values: NDArray[np.float64], n_dofs: int
) -> list[NDArray[np.float64]]:
    columns = []
    for j in _independent_columns(values):
        column = np.zeros(n_dofs)
        column[dofs] = values[:, j]
        columns.append(column)
    return columns


def _stack(columns: list[NDArray[np.float64]], n_dofs: int) -> NDArray[np.float64]:
    if not columns:
        return np.zeros((n_dofs, 0))
    return np.column_stack(columns)


def gdsw_interface_values(
    partition: InterfacePartition, nullspace: NDArray[np.float64]
) -> NDArray[np.float64]:
    """One column per interface component and independent nullspace vector."""

    n_dofs = nullspace.shape[0]
    columns: list[NDArray[np.float64]] = []
    for component in partition.components:
        columns += _columns_on(component.dofs, nullspace[component.dofs], n_dofs)
    return _stack(columns, n_dofs)


def _is_ancestor(partition: InterfacePartition, a: int, b: int) -> bool:
    """Whether component ``a`` touches more subdomains than, and all those of, ``b``."""

    sig_a = set(partition.components[a].signature)
    sig_b = set(partition.components[b].signature)
    return sig_a > sig_b


def coarse_entities(partition: InterfacePartition) -> dict[int, list[int]]:
    """Map each interface component to the coarse entities that share its DoFs.

    Coarse entities are components with no neighbouring component of a strictly
    larger signature; every other component is shared among its neighbouring
    entities. A component without any neighbouring entity, such as the single edge
    between two strips, becomes an entity of its own.
    """

    adjacency = partition.adjacency
    n = len(partition.components)
    entities = {
        c
        for c in range(n)
        if not any(_is_ancestor(partition, a, c) for a in adjacency[c])
    }
    owners: dict[int, list[int]] = {}
    for c in range(n):
        if c in entities:
            owners[c] = [c]
            continue
        ancestors = sorted(
            a for a in adjacency[c] if a in entities and _is_ancestor(partition, a, c)
        )
        owners[c] = ancestors if ancestors else [c]
    return owners


def rgdsw_interface_values(
    partition: InterfacePartition, nullspace: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Entity-anchored columns weighted by the number of entities sharing a DoF."""

    n_dofs = nullspace.shape[0]
    owners = coarse_entities(partition)
    weights: dict[int, NDArray[np.float64]] = {}
    for c, entity_list in owners.items():
        for entity in entity_list:
            if entity not in weights:
                weights[entity] = np.zeros(n_dofs)
            weights[entity][partition.components[c].dofs] = 1.0 / len(entity_list)

    columns: list[NDArray[np.float64]] = []
    for entity in sorted(weights):
        support = np.flatnonzero(weights[entity])
        scaled = nullspace[support] * weights[entity][support, None]
        columns += _columns_on(support, scaled, n_dofs)
    return _stack(columns, n_dofs)


def subdomain_values(
    decomp: Decomposition, nullspace: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Nullspace vectors restricted to each nonoverlapping DoF set."""

    n_dofs = nullspace.shape[0]
    free = np.ones(n_dofs, dtype=bool)
    free[decomp.dirichlet_dofs] = False
    columns: list[NDArray[np.float64]] = []
    for dofs in decomp.nonoverlapping_dofs:
        kept = dofs[free[dofs]]
        columns += _columns_on(kept, nullspace[kept], n_dofs)
    return _stack(columns, n_dofs)


def _interior_and_border(
    decomp: Decomposition,
) -> list[tuple[NDArray[np.int64], NDArray[np.int64]]]:
    on_border = np.zeros(decomp.n_dofs, dtype=bool)
    on_border[decomp.interface_dofs] = True
    on_border[decomp.dirichlet_dofs] = True
    return [
        (closure[~on_border[closure]], closure[on_border[closure]])
        for closure in decomp.closure_dofs
    ]


def extend_harmonically(
    K: SparseMatrix, decomp: Decomposition, phi_gamma: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Fill subdomain interiors with the discrete harmonic extension.

    Each interior block solves ``K_II phi_I = -K_IB phi_B`` where ``B`` holds the
    subdomain's interface and Dirichlet DoFs. Dirichlet rows of the result are zero.

    :raises SubdomainSolveError: if an interior block is singular
    """

    phi = np.array(phi_gamma, dtype=float)
    phi[decomp.dirichlet_dofs] = 0.0
    if phi.shape[1] == 0:
        return phi
    for i, (interior, border) in enumerate(_interior_and_border(decomp)):
        if interior.size == 0:
            continue
        try:
            fact = dense_lu_factor(submatrix(K, interior, interior))
        except SingularMatrixError as exc:
            raise SubdomainSolveError(i, "harmonic extension") from exc
        phi[interior] = -fact.solve(submatrix(K, interior, border) @ phi[border])
    return phi


def harmonic_defect(
    K: SparseMatrix, decomp: Decomposition, phi: SparseMatrix | NDArray[np.float64]
) -> float:
    """Largest entry of ``K_II phi_I + K_IB phi_B`` over all subdomains."""

    dense = phi.toarray() if sp.issparse(phi) else np.asarray(phi)
    worst = 0.0
    for interior, border in _interior_and_border(decomp):
        if interior.size == 0 or dense.shape[1] == 0:
            continue
        defect = (
            submatrix(K, interior, interior) @ dense[interior]
            + submatrix(K, interior, border) @ dense[border]
        )
        worst = max(worst, float(np.abs(defect).max()))
    return worst


def coarse_basis_from_values(
    K: SparseMatrix,
    decomp: Decomposition,
    phi_gamma: NDArray[np.float64],
    kind: str,
    *,
    extend: bool = True,
) -> CoarseBasis:
    """Extend interface values and factorize the Galerkin matrix.

    :raises CoarseSpaceError: if there are no columns or ``phi^T K phi`` is singular
    """

    if phi_gamma.shape[1] == 0:
        raise CoarseSpaceError(f"Empty {kind} coarse space")
    start = time.perf_counter()
    dense = extend_harmonically(K, decomp, phi_gamma) if extend else phi_gamma
    phi = sp.csr_matrix(dense)
    phi.eliminate_zeros()
    K0 = (phi.T @ K @ phi).toarray()
    try:
        fact = dense_lu_factor(K0)
    except SingularMatrixError as exc:
        raise CoarseSpaceError(
            f"Singular {kind} coarse matrix of dimension {phi.shape[1]}"
        ) from exc
    log.info(
        "Built %s coarse space of dimension %d in %.4f s",
        kind,
        phi.shape[1],
        time.perf_counter() - start,
    )
    return CoarseBasis(phi=phi, k0_fact=fact, kind=kind)


def build_gdsw_basis(
    K: SparseMatrix,
    decomp: Decomposition,
    nullspace: NDArray[np.float64] | None = None,
    partition: InterfacePartition | None = None,
) -> CoarseBasis:
    """GDSW coarse basis; constants when no nullspace is given."""

    modes = np.ones((K.shape[0], 1)) if nullspace is None else nullspace
    interface = classify_interface(decomp) if partition is None else partition
    return coarse_basis_from_values(
        K, decomp, gdsw_interface_values(interface, modes), "gdsw"
    )


def build_rgdsw_basis(
    K: SparseMatrix,
    decomp: Decomposition,
    nullspace: NDArray[np.float64] | None = None,
    partition: InterfacePartition | None = None,
) -> CoarseBasis:
    """Reduced (entity-anchored) GDSW coarse basis."""

    modes = np.ones((K.shape[0], 1)) if nullspace is None else nullspace
    interface = classify_interface(decomp) if partition is None else partition
    return coarse_basis_from_values(
        K, decomp, rgdsw_interface_values(interface, modes), "rgdsw"
    )


def build_subdomain_basis(
    K: SparseMatrix,
    decomp: Decomposition,
    nullspace: NDArray[np.float64] | None = None,
) -> CoarseBasis:
    """Piecewise nullspace basis, one block of columns per subdomain."""

    modes = np.ones((K.shape[0], 1)) if nullspace is None else nullspace
    return coarse_basis_from_values(
        K, decomp, subdomain_values(decomp, modes), "subdomain", extend=False
    )


def build_coarse_basis(
    K: SparseMatrix,
    decomp: Decomposition,
    kind: str,
    nullspace: NDArray[np.float64] | None = None,
) -> CoarseBasis:
    """Dispatch on the coarse space name."""

    if kind == "gdsw":
        return build_gdsw_basis(K, decomp, nullspace)
    if kind == "rgdsw":
        return build_rgdsw_basis(K, decomp, nullspace)
    if kind == "subdomain":
        return build_subdomain_basis(K, decomp, nullspace)
    raise ValueError(f"Unknown coarse space {kind!r}, expected one of {COARSE_KINDS}")


def interface_values(
    decomp: Decomposition,
    kind: str,
    nullspace: NDArray[np.float64],
    partition: InterfacePartition | None = None,
) -> NDArray[np.float64]:
    """Interface values of a coarse space before extension."""

    if kind == "subdomain":
        return subdomain_values(decomp, nullspace)
    interface = classify_interface(decomp) if partition is None else partition
    if kind == "gdsw":
        return gdsw_interface_values(interface, nullspace)
    if kind == "rgdsw":
        return rgdsw_interface_values(interface, nullspace)
    raise ValueError(f"Unknown coarse space {kind!r}, expected one of {COARSE_KINDS}")


def export_coarse_basis(basis: CoarseBasis, path: Path) -> None:
    """Write the coarse basis as a Matrix Market file."""

    write_matrix_market(path, basis.phi)
