"""
Harmonic extension of the interface displacement into the fluid mesh.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import SparseMatrix, identity_rows

from .dofmap import build_dofmaps
from .exceptions import MeshError
from .reference import element_geometry
from .scatter import scatter_matrix

if TYPE_CHECKING:
    from .mesh import Mesh


def vector_laplacian(mesh: Mesh) -> SparseMatrix:
    """Componentwise stiffness ``(grad d_c, grad e_c)`` on the mesh displacements."""

    g_map = build_dofmaps(mesh).d_f
    geo = element_geometry(mesh, g_map.elements)
    scalar = np.einsum("eq,eqak,eqbk->eab", geo.weights, geo.grad_p2, geo.grad_p2)
    local = np.einsum("eab,cd->eacbd", scalar, np.eye(2)).reshape(len(scalar), 12, 12)
    n = g_map.n_dofs
    return scatter_matrix(local, g_map.element_dofs, g_map.element_dofs, n, n)


def assemble_geometry(mesh: Mesh) -> SparseMatrix:
    """The geometry operator G.

    Rows of interface DoFs are identity rows (their data comes from the solid through
    the coupling block), rows of fixed normal components on the other fluid boundaries
    are identity rows with zero data, and all other rows hold the vector Laplacian.

    :raises MeshError: if the mesh has no fluid elements
    """

    g_map = build_dofmaps(mesh).d_f
    if g_map.elements.size == 0:
        raise MeshError("Geometry problem needs a non-empty fluid region")
    fixed = np.union1d(g_map.interface_dofs, g_map.dirichlet_dofs)
    return identity_rows(vector_laplacian(mesh), fixed)

