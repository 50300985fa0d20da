"""
Degree-of-freedom maps of the four coupled fields.

Vector fields number their DoFs node by node with interleaved components
(``2 * local_node + component``); local nodes are the field's mesh nodes in increasing
global order, so fields sharing nodes list them in the same order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
from typing import TYPE_CHECKING

import numpy as np

from .exceptions import CouplingError
from .mesh import FLUID, SOLID, Mesh

if TYPE_CHECKING:
    from numpy.typing import NDArray

FIELDS: tuple[str, ...] = ("u", "p", "d_s", "d_f")


@dataclass(frozen=True, eq=False)
class DofMap:
    """DoF numbering of one field.

    :param field: ``u`` (fluid velocity), ``p`` (fluid pressure), ``d_s`` (solid
        displacement) or ``d_f`` (fluid mesh displacement)
    :param nodes: global mesh node ids carrying the field, sorted
    :param n_components: 2 for vector fields, 1 for pressure
    :param elements: mesh elements the field lives on
    :param element_dofs: DoFs of each of those elements, in local element order
    :param interface_dofs: DoFs coupled across the fluid-solid interface
    :param dirichlet_dofs: DoFs fixed by boundary conditions
    """

    field: str
    nodes: NDArray[np.int64]
    n_components: int
    coordinates: NDArray[np.float64]
    elements: NDArray[np.int64]
    element_dofs: NDArray[np.int64]
    interface_dofs: NDArray[np.int64]
    dirichlet_dofs: NDArray[np.int64]

    @property
    def n_dofs(self) -> int:
        return int(self.nodes.size * self.n_components)

    @cached_property
    def interior_dofs(self) -> NDArray[np.int64]:
        return np.setdiff1d(np.arange(self.n_dofs), self.interface_dofs)

    @cached_property
    def dof_of_node(self) -> dict[int, int]:
        """Global node id to the DoF of its first component."""

        return {int(n): i * self.n_components for i, n in enumerate(self.nodes)}

    def dofs(
        self, nodes: NDArray[np.int64], components: tuple[int, ...] = (0, 1)
    ) -> NDArray[np.int64]:
        """Sorted DoFs of the given global nodes (nodes off the field are skipped)."""

        found = np.intersect1d(self.nodes, nodes, assume_unique=False)
        local = np.searchsorted(self.nodes, found)
        comps = [c for c in components if c < self.n_components]
        out = (local[:, None] * self.n_components + np.array(comps)[None, :]).ravel()
        return np.unique(out)

    def node_coordinate_of_dof(self) -> NDArray[np.float64]:
        """Coordinates of the node carrying each DoF."""

        return np.repeat(self.coordinates, self.n_components, axis=0)


@dataclass(frozen=True, eq=False)
class FsiDofMaps:
    """DoF maps of all fields plus the interface pairing.

    Slot ``k`` of the interface multiplier couples fluid velocity DoF
    ``fluid_slots[k]`` with solid DoF ``solid_slots[k]`` and mesh DoF
    ``geometry_slots[k]``.
    """

    u: DofMap
    p: DofMap
    d_s: DofMap
    d_f: DofMap
    fluid_slots: NDArray[np.int64]
    solid_slots: NDArray[np.int64]
    geometry_slots: NDArray[np.int64]
    inlet_dofs: NDArray[np.int64]

    @property
    def n_interface(self) -> int:
        return int(self.fluid_slots.size)

    @property
    def layout(self) -> dict[str, int]:
        """Segment sizes in block vector order."""

        return {
            "solid": self.d_s.n_dofs,
            "geometry": self.d_f.n_dofs,
            "fluid_velocity": self.u.n_dofs,
            "fluid_pressure": self.p.n_dofs,
            "interface": self.n_interface,
        }

    def __getitem__(self, name: str) -> DofMap:
        if name not in FIELDS:
            raise KeyError(name)
        dof_map: DofMap = getattr(self, name)
        return dof_map


def _unique(nodes: NDArray[np.int64]) -> NDArray[np.int64]:
    return np.unique(nodes).astype(np.int64)


def _element_dofs(
    element_nodes: NDArray[np.int64], nodes: NDArray[np.int64], n_components: int
) -> NDArray[np.int64]:
    local = np.searchsorted(nodes, element_nodes)
    if n_components == 1:
        return local
    stacked = local[:, :, None] * n_components + np.arange(n_components)[None, None, :]
    return stacked.reshape(local.shape[0], local.shape[1] * n_components)


def _vector_map(
    mesh: Mesh,
    field: str,
    elements: NDArray[np.int64],
    interface_nodes: NDArray[np.int64],
    fixed: list[tuple[NDArray[np.int64], tuple[int, ...]]],
) -> DofMap:
    nodes = _unique(mesh.element_nodes[elements])
    draft = DofMap(
        field=field,
        nodes=nodes,
        n_components=2,
        coordinates=mesh.node_coordinates[nodes],
        elements=elements,
        element_dofs=_element_dofs(mesh.element_nodes[elements], nodes, 2),
        interface_dofs=np.zeros(0, np.int64),
        dirichlet_dofs=np.zeros(0, np.int64),
    )
    interface = draft.dofs(interface_nodes)
    dirichlet_parts = [draft.dofs(fixed_nodes, comps) for fixed_nodes, comps in fixed]
    dirichlet = (
        np.setdiff1d(np.unique(np.concatenate(dirichlet_parts)), interface)
        if dirichlet_parts
        else np.zeros(0, np.int64)
    )
    return DofMap(
        field=field,
        nodes=nodes,
        n_components=2,
        coordinates=draft.coordinates,
        elements=elements,
        element_dofs=draft.element_dofs,
        interface_dofs=interface,
        dirichlet_dofs=dirichlet.astype(np.int64),
    )


@cache
def build_dofmaps(mesh: Mesh) -> FsiDofMaps:
    """Number the DoFs of every field and pair them across the interface.

    Interface nodes that also lie on a clamped edge are held fixed rather than
    coupled.

    :raises CouplingError: if an interface node is missing from the fluid or solid
        side
    """

    fluid = mesh.elements_in(FLUID)
    solid = mesh.elements_in(SOLID)
    clamp = mesh.tag_nodes("clamp")
    inlet = mesh.tag_nodes("inlet")
    outlet = mesh.tag_nodes("outlet")
    symmetry = mesh.tag_nodes("symmetry")
    coupled = np.setdiff1d(mesh.tag_nodes("interface"), clamp)

    fluid_nodes = _unique(mesh.element_nodes[fluid])
    solid_nodes = _unique(mesh.element_nodes[solid])
    missing = np.setdiff1d(coupled, np.intersect1d(fluid_nodes, solid_nodes))
    if missing.size:
        raise CouplingError(
            f"Interface nodes {missing.tolist()} are not shared by fluid and solid"
        )

    u = _vector_map(
        mesh,
        "u",
        fluid,
        coupled,
        [(inlet, (0, 1)), (clamp, (0, 1)), (symmetry, (1,))],
    )
    d_f = _vector_map(
        mesh,
        "d_f",
        fluid,
        coupled,
        [(inlet, (0,)), (outlet, (0,)), (clamp, (0, 1)), (symmetry, (1,))],
    )
    d_s = _vector_map(mesh, "d_s", solid, coupled, [(clamp, (0, 1))])

    p_nodes = _unique(mesh.triangles[fluid])
    p = DofMap(
        field="p",
        nodes=p_nodes,
        n_components=1,
        coordinates=mesh.vertices[p_nodes],
        elements=fluid,
        element_dofs=_element_dofs(mesh.triangles[fluid], p_nodes, 1),
        interface_dofs=np.zeros(0, np.int64),
        dirichlet_dofs=np.zeros(0, np.int64),
    )

    if u.interface_dofs.size != d_s.interface_dofs.size:
        raise CouplingError(
            f"{u.interface_dofs.size} fluid and {d_s.interface_dofs.size} solid "
            "interface DoFs"
        )
    return FsiDofMaps(
        u=u,
        p=p,
        d_s=d_s,
        d_f=d_f,
        fluid_slots=u.interface_dofs,
        solid_slots=d_s.interface_dofs,
        geometry_slots=d_f.interface_dofs,
        inlet_dofs=u.dofs(np.setdiff1d(inlet, clamp)),
    )
