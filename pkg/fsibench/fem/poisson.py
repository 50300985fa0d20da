"""
Linear (P1) Laplace problem on a single-region mesh.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from fsibench.linalg import SparseMatrix, identity_rows

from .reference import element_geometry
from .scatter import scatter_matrix, scatter_vector

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from .mesh import Mesh


class PoissonProblem(NamedTuple):
    K: SparseMatrix
    rhs: NDArray[np.float64]
    dirichlet_dofs: NDArray[np.int64]
    element_dofs: NDArray[np.int64]


def assemble_poisson(
    mesh: Mesh,
    dirichlet_tags: tuple[str, ...] | None = None,
    source: float = 1.0,
) -> PoissonProblem:
    """Assemble ``-lap u = source`` with homogeneous Dirichlet data.

    DoFs are the mesh vertices. Dirichlet rows become identity rows with zero data.

    :param dirichlet_tags: boundary tags to hold fixed; all tagged edges by default
        and none for an empty tuple
    """

    elements = np.arange(mesh.n_elements)
    geo = element_geometry(mesh, elements)
    local = np.einsum("eq,eqak,eqbk->eab", geo.weights, geo.grad_p1, geo.grad_p1)
    n = mesh.n_vertices
    K = scatter_matrix(local, mesh.triangles, mesh.triangles, n, n)
    load = source * np.einsum("eq,qa->ea", geo.weights, geo.values_p1)
    rhs = scatter_vector(load, mesh.triangles, n)

    tags = set(
        mesh.boundary_tags.values() if dirichlet_tags is None else dirichlet_tags
    )
    fixed = np.unique(
        [v for edge, tag in mesh.boundary_tags.items() if tag in tags for v in edge]
    ).astype(np.int64)
    rhs[fixed] = 0.0
    return PoissonProblem(identity_rows(K, fixed), rhs, fixed, mesh.triangles.copy())
