"""
Linear-elastic wall in plane strain with Newmark inertia.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple, Protocol

import numpy as np

from fsibench.linalg import SparseMatrix, canonical, zeros

from .dofmap import build_dofmaps
from .reference import element_geometry
from .scatter import scatter_matrix

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.linalg import BlockVector

    from .mesh import Mesh
    from .params import PhysicalParams
    from .reference import ElementGeometry


class ElementStiffness(Protocol):
    """Material hook: element stiffness matrices ``K[e, (a, c), (b, d)]``."""

    def __call__(
        self, geo: ElementGeometry, params: PhysicalParams
    ) -> NDArray[np.float64]:
        ...


class SolidBlocks(NamedTuple):
    S: SparseMatrix
    residual_s: NDArray[np.float64]
    K: SparseMatrix
    M: SparseMatrix


def linear_elastic_stiffness(
    geo: ElementGeometry, params: PhysicalParams
) -> NDArray[np.float64]:
    """Plane strain Hooke's law, ``lambda div u div v + 2 mu eps(u) : eps(v)``."""

    lam, mu = params.lame
    G, W = geo.grad_p2, geo.weights
    dilatation = lam * np.einsum("eq,eqac,eqbd->eacbd", W, G, G)
    shear = mu * np.einsum("eq,eqak,eqbk,cd->eacbd", W, G, G, np.eye(2))
    shear += mu * np.einsum("eq,eqad,eqbc->eacbd", W, G, G)
    local: NDArray[np.float64] = (dilatation + shear).reshape(len(W), 12, 12)
    return local


def assemble_solid(
    state: BlockVector,
    mesh: Mesh,
    params: PhysicalParams,
    *,
    predictor: NDArray[np.float64] | None = None,
    beta: float = 0.25,
    stiffness: ElementStiffness = linear_elastic_stiffness,
) -> SolidBlocks:
    """Assemble the Newmark-effective solid operator and residual.

    ``S = rho_s M / (beta dt^2) + K`` and the residual is ``K d + rho_s M a`` with the
    Newmark acceleration ``a = (d - predictor) / (beta dt^2)``. Boundary conditions are
    applied by the caller.

    :param predictor: Newmark displacement predictor (zero if omitted)
    :param stiffness: element stiffness callback
    """

    d_map = build_dofmaps(mesh).d_s
    n = d_map.n_dofs
    d = np.asarray(state["solid"], dtype=float)
    d_pred = np.zeros(n) if predictor is None else np.asarray(predictor, dtype=float)
    if d_map.elements.size == 0:
        return SolidBlocks(zeros(n, n), np.zeros(n), zeros(n, n), zeros(n, n))

    geo = element_geometry(mesh, d_map.elements)
    dofs = d_map.element_dofs
    local_k = stiffness(geo, params)
    scalar_m = np.einsum("eq,qa,qb->eab", geo.weights, geo.values_p2, geo.values_p2)
    local_m = np.einsum("eab,cd->eacbd", scalar_m, np.eye(2)).reshape(local_k.shape)

    K = scatter_matrix(local_k, dofs, dofs, n, n)
    M = scatter_matrix(local_m, dofs, dofs, n, n)
    inertia = params.rho_s / (beta * params.dt**2)
    S = canonical(inertia * M + K)
    residual = K @ d + inertia * (M @ (d - d_pred))
    return SolidBlocks(S=S, residual_s=np.asarray(residual), K=K, M=M)

