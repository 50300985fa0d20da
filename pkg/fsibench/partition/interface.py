"""
Classification of interface DoFs into vertex and edge components.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import networkx as nx
import numpy as np

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from .decomposition import Decomposition


@dataclass(frozen=True, eq=False)
class InterfaceComponent:
    """Connected interface DoFs sharing one subdomain signature."""

    dofs: NDArray[np.int64]
    signature: tuple[int, ...]

    @property
    def kind(self) -> str:
        """``vertex`` for three or more subdomains, ``edge`` for two (in 2D)."""

        return "vertex" if len(self.signature) >= 3 else "edge"


@dataclass(frozen=True, eq=False)
class InterfacePartition:
    """Interface components and which of them touch each other."""

    components: tuple[InterfaceComponent, ...]
    adjacency: nx.Graph

    @property
    def vertices(self) -> list[int]:
        return [i for i, c in enumerate(self.components) if c.kind == "vertex"]

    @property
    def edges(self) -> list[int]:
        return [i for i, c in enumerate(self.components) if c.kind == "edge"]

    @cached_property
    def component_of_dof(self) -> dict[int, int]:
        return {int(d): i for i, c in enumerate(self.components) for d in c.dofs}

    @cached_property
    def dofs(self) -> NDArray[np.int64]:
        if not self.components:
            return np.zeros(0, np.int64)
        return np.sort(np.concatenate([c.dofs for c in self.components]))


def dof_graph(decomp: Decomposition, dofs: NDArray[np.int64]) -> nx.Graph:
    """DoFs joined when they belong to a common element, restricted to ``dofs``."""

    chosen = np.zeros(decomp.n_dofs, dtype=bool)
    chosen[dofs] = True
    graph = nx.Graph()
    graph.add_nodes_from(int(d) for d in dofs)
    for element in decomp.element_dofs:
        members = [int(d) for d in element if chosen[d]]
        for pos, a in enumerate(members):
            graph.add_edges_from((a, b) for b in members[pos + 1 :] if a != b)
    return graph


def classify_interface(
    decomp: Decomposition, dof_connectivity: nx.Graph | None = None
) -> InterfacePartition:
    """Group interface DoFs by subdomain signature and connectivity.

    Interface DoFs are those in the owned-element closure of two or more subdomains;
    fixed (Dirichlet) DoFs are left out. Two interface DoFs share a component exactly
    when they have the same signature and are connected through interface DoFs of
    that signature.

    :param dof_connectivity: DoF adjacency; by default DoFs sharing an element
    """

    interface = np.setdiff1d(decomp.interface_dofs, decomp.dirichlet_dofs)
    if dof_connectivity is None:
        graph = dof_graph(decomp, interface)
    else:
        graph = dof_connectivity.subgraph(int(d) for d in interface)
    signatures = decomp.signatures

    same = nx.Graph()
    same.add_nodes_from(int(d) for d in interface)
    same.add_edges_from(
        (a, b) for a, b in graph.edges if signatures[a] == signatures[b]
    )
    groups = sorted(
        (np.array(sorted(c), dtype=np.int64) for c in nx.connected_components(same)),
        key=lambda dofs: int(dofs[0]),
    )
    components = tuple(
        InterfaceComponent(dofs, signatures[int(dofs[0])]) for dofs in groups
    )

    index = {int(d): i for i, c in enumerate(components) for d in c.dofs}
    adjacency = nx.Graph()
    adjacency.add_nodes_from(range(len(components)))
    adjacency.add_edges_from(
        (index[a], index[b]) for a, b in graph.edges if index[a] != index[b]
    )
    return InterfacePartition(components, adjacency)
