"""
Per-field decompositions induced from one mesh partition.

The mesh is partitioned once; every field (solid displacement, mesh displacement,
velocity, pressure and the coupled velocity-pressure pair) takes the DoFs of its
elements in each subdomain. Subdomains without elements of a field drop out of that
field's decomposition.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .decomposition import Decomposition, induce_field
from .partitioner import extend_overlap, partition_boxes, partition_elements

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.fem import FsiDofMaps, Mesh

PARTITIONERS: tuple[str, ...] = ("bfs", "boxes")


class FieldDecompositions(NamedTuple):
    mesh: Decomposition
    solid: Decomposition | None
    geometry: Decomposition | None
    velocity: Decomposition
    pressure: Decomposition
    fluid: Decomposition


def box_grid(n_parts: int, aspect: float = 1.0) -> tuple[int, int]:
    """Factor ``n_parts`` into ``nx * ny`` boxes, ``nx / ny`` close to ``aspect``."""

    best = (n_parts, 1)
    best_error = math.inf
    for ny in range(1, n_parts + 1):
        if n_parts % ny:
            continue
        nx = n_parts // ny
        error = abs(math.log(nx / ny / aspect))
        if error < best_error:
            best, best_error = (nx, ny), error
    return best


def partition_mesh(
    mesh: Mesh, n_parts: int, overlap: int = 1, seed: int = 0, method: str = "bfs"
) -> Decomposition:
    """Partition the mesh elements and add ``overlap`` element layers."""

    if method == "bfs":
        owners = partition_elements(mesh, n_parts, seed)
    elif method == "boxes":
        extent = mesh.vertices.max(axis=0) - mesh.vertices.min(axis=0)
        owners = partition_boxes(mesh, *box_grid(n_parts, extent[0] / extent[1]))
    else:
        raise ValueError(
            f"Unknown partitioner {method!r}, expected one of {PARTITIONERS}"
        )
    return extend_overlap(owners, mesh, overlap)


def coupled_fluid_dofs(maps: FsiDofMaps) -> NDArray[np.int64]:
    """Element DoFs of the coupled velocity-pressure numbering (velocity first)."""

    return np.hstack([maps.u.element_dofs, maps.u.n_dofs + maps.p.element_dofs])


def decompose_fields(
    mesh: Mesh,
    maps: FsiDofMaps,
    n_parts: int,
    overlap: int = 1,
    seed: int = 0,
    method: str = "bfs",
) -> FieldDecompositions:
    """Decompose the mesh and induce the DoF sets of every field.

    Geometry rows on the interface and on slip boundaries are identity rows, so they
    count as fixed DoFs of the geometry decomposition.
    """

    base = partition_mesh(mesh, n_parts, overlap, seed, method)
    solid = geometry = None
    if maps.d_s.elements.size:
        solid = induce_field(
            base,
            maps.d_s.elements,
            maps.d_s.element_dofs,
            maps.d_s.n_dofs,
            maps.d_s.dirichlet_dofs,
        )
    if maps.n_interface:
        geometry = induce_field(
            base,
            maps.d_f.elements,
            maps.d_f.element_dofs,
            maps.d_f.n_dofs,
            np.union1d(maps.d_f.interface_dofs, maps.d_f.dirichlet_dofs),
        )
    velocity = induce_field(
        base, maps.u.elements, maps.u.element_dofs, maps.u.n_dofs, maps.u.dirichlet_dofs
    )
    pressure = induce_field(base, maps.p.elements, maps.p.element_dofs, maps.p.n_dofs)
    fluid = induce_field(
        base,
        maps.u.elements,
        coupled_fluid_dofs(maps),
        maps.u.n_dofs + maps.p.n_dofs,
        maps.u.dirichlet_dofs,
    )
    return FieldDecompositions(base, solid, geometry, velocity, pressure, fluid)
