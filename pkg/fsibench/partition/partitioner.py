"""
Built-in element partitioner and overlap extension.

Subdomains grow from seeds by breadth-first search: the smallest subdomain (lowest id
on ties) claims one element of its frontier at a time. Seeds are spread by
farthest-point sampling from a random first seed. If growth leaves the parts
unbalanced, a recursive bisection along breadth-first orderings is tried instead.
"""
from __future__ import annotations

from collections import deque
from typing import TYPE_CHECKING

import networkx as nx
import numpy as np

from fsibench.fem.mesh import Mesh, element_graph
from fsibench.utils.log import logger

from .decomposition import Decomposition
from .exceptions import PartitionError

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from fsibench.linalg import SparseMatrix

log = logger(__name__)

BALANCE_TOLERANCE: float = 0.2


def _as_graph(mesh_or_graph: Mesh | nx.Graph, by: str) -> nx.Graph:
    if isinstance(mesh_or_graph, Mesh):
        return element_graph(mesh_or_graph, by=by)
    return mesh_or_graph


def _farthest_seeds(graph: nx.Graph, n_parts: int, first: int) -> list[int]:
    seeds = [first]
    distance = dict(nx.single_source_shortest_path_length(graph, first))
    while len(seeds) < n_parts:
        # Unreachable elements count as infinitely far
        candidates = [v for v in sorted(graph.nodes) if v not in seeds]
        far = max(candidates, key=lambda v: (distance.get(v, np.inf), -v))
        seeds.append(far)
        for v, d in nx.single_source_shortest_path_length(graph, far).items():
            distance[v] = min(distance.get(v, np.inf), d)
    return seeds


def _grow(graph: nx.Graph, seeds: list[int]) -> NDArray[np.int64]:
    n_parts = len(seeds)
    owner = {v: -1 for v in graph.nodes}
    sizes = [0] * n_parts
    frontiers = [deque([s]) for s in seeds]
    unclaimed = len(owner)
    while unclaimed:
        active = [i for i in range(n_parts) if frontiers[i]]
        if not active:
            # A part was cut off from the rest; restart growth in the smallest part
            smallest = min(range(n_parts), key=lambda i: (sizes[i], i))
            restart = min(v for v, o in owner.items() if o < 0)
            frontiers[smallest].append(restart)
            continue
        part = min(active, key=lambda i: (sizes[i], i))
        frontier = frontiers[part]
        while frontier and owner[frontier[0]] >= 0:
            frontier.popleft()
        if not frontier:
            continue
        element = frontier.popleft()
        owner[element] = part
        sizes[part] += 1
        unclaimed -= 1
        frontier.extend(v for v in sorted(graph.neighbors(element)) if owner[v] < 0)
    return np.array([owner[v] for v in sorted(graph.nodes)], dtype=np.int64)


def _bfs_order(graph: nx.Graph, nodes: list[int]) -> list[int]:
    sub = graph.subgraph(nodes)
    start = min(nodes)
    # Pseudo-peripheral start: the farthest node from the lowest id
    lengths = nx.single_source_shortest_path_length(sub, start)
    start = max(lengths, key=lambda v: (lengths[v], -v))
    order = [start] + [v for _, v in nx.bfs_edges(sub, start, sort_neighbors=sorted)]
    seen = set(order)
    order += [v for v in sorted(nodes) if v not in seen]
    return order


def _bisect(
    graph: nx.Graph,
    nodes: list[int],
    n_parts: int,
    first_id: int,
    owner: dict[int, int],
) -> None:
    if n_parts == 1:
        for v in nodes:
            owner[v] = first_id
        return
    left_parts = n_parts // 2
    order = _bfs_order(graph, nodes)
    cut = round(len(order) * left_parts / n_parts)
    _bisect(graph, sorted(order[:cut]), left_parts, first_id, owner)
    right_parts = n_parts - left_parts
    _bisect(graph, sorted(order[cut:]), right_parts, first_id + left_parts, owner)


def _quality(
    graph: nx.Graph, owner: NDArray[np.int64], n_parts: int
) -> tuple[int, bool]:
    """Size spread and connectivity of a partition."""

    nodes = np.array(sorted(graph.nodes))
    sizes = np.bincount(owner, minlength=n_parts)
    connected = all(
        sizes[i] > 0 and nx.is_connected(graph.subgraph(nodes[owner == i].tolist()))
        for i in range(n_parts)
    )
    return int(sizes.max() - sizes.min()), connected


def _split_counts(sizes: list[int], n_parts: int) -> list[int]:
    """Parts per component, at least one each and never more than its size."""

    counts = [1] * len(sizes)
    for _ in range(n_parts - len(sizes)):
        open_ = [i for i in range(len(sizes)) if counts[i] < sizes[i]]
        grow = max(open_, key=lambda i: (sizes[i] / counts[i], -i))
        counts[grow] += 1
    return counts


def _by_components(
    graph: nx.Graph, n_parts: int, seed: int
) -> NDArray[np.int64]:
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=min)
    owner: dict[int, int] = {}
    if n_parts < len(components):
        # Fewer parts than components: pack whole components, largest first
        loads = [0] * n_parts
        for nodes in sorted(components, key=lambda c: (-len(c), c[0])):
            part = min(range(n_parts), key=lambda i: (loads[i], i))
            loads[part] += len(nodes)
            owner.update((v, part) for v in nodes)
        return np.array([owner[v] for v in sorted(graph.nodes)], dtype=np.int64)

    counts = _split_counts([len(c) for c in components], n_parts)
    first_id = 0
    for nodes, count in zip(components, counts):
        local = nx.relabel_nodes(
            graph.subgraph(nodes), {v: i for i, v in enumerate(nodes)}
        )
        parts = partition_elements(local, count, seed).owner_of_element
        owner.update((v, first_id + int(p)) for v, p in zip(nodes, parts))
        first_id += count
    return np.array([owner[v] for v in sorted(graph.nodes)], dtype=np.int64)


def _owners_only(owner: NDArray[np.int64], n_parts: int) -> Decomposition:
    sets = tuple(np.flatnonzero(owner == i) for i in range(n_parts))
    return Decomposition(
        n_subdomains=n_parts, owner_of_element=owner, element_sets=sets
    )


def partition_elements(
    mesh_or_graph: Mesh | nx.Graph, n_parts: int, seed: int = 0
) -> Decomposition:
    """Split the elements into ``n_parts`` connected subdomains.

    A disconnected graph is split component by component, with parts handed out in
    proportion to component size.

    :param mesh_or_graph: a mesh (elements joined across shared edges) or an element
        adjacency graph with nodes ``0 .. n - 1``
    :param n_parts: number of subdomains
    :param seed: seed of the first growth seed
    :raises PartitionError: if ``n_parts`` is not between 1 and the element count
    """

    graph = _as_graph(mesh_or_graph, "edge")
    n_elements = graph.number_of_nodes()
    if n_parts < 1 or n_parts > n_elements:
        raise PartitionError(n_parts, n_elements)
    if n_parts == 1:
        return _owners_only(np.zeros(n_elements, dtype=np.int64), 1)
    if not nx.is_connected(graph):
        n_components = nx.number_connected_components(graph)
        log.info("Graph has %d components; splitting each", n_components)
        return _owners_only(_by_components(graph, n_parts, seed), n_parts)

    rng = np.random.default_rng(seed)
    nodes = sorted(graph.nodes)
    first = nodes[int(rng.integers(n_elements))]
    grown = _grow(graph, _farthest_seeds(graph, n_parts, first))
    spread, connected = _quality(graph, grown, n_parts)
    mean = n_elements / n_parts
    if spread <= 1 and connected:
        return _owners_only(grown, n_parts)

    bisected_map: dict[int, int] = {}
    _bisect(graph, nodes, n_parts, 0, bisected_map)
    bisected = np.array([bisected_map[v] for v in nodes], dtype=np.int64)
    b_spread, b_connected = _quality(graph, bisected, n_parts)
    limit = (1.0 + BALANCE_TOLERANCE) * mean
    grown_ok = connected and np.bincount(grown).max() <= limit
    if b_connected and (b_spread < spread or not grown_ok):
        log.info("Growth partition unbalanced (spread %d); using bisection", spread)
        return _owners_only(bisected, n_parts)
    if not grown_ok:
        log.warning(
            "Partition into %d parts is unbalanced or disconnected (spread %d)",
            n_parts,
            spread,
        )
    return _owners_only(grown, n_parts)


def partition_boxes(mesh: Mesh, nx_parts: int, ny_parts: int) -> Decomposition:
    """Structured partition of a rectangle mesh into a grid of boxes.

    Element ``e`` goes to box ``ix + nx_parts * iy`` of its centroid.
    """

    if nx_parts < 1 or ny_parts < 1 or nx_parts * ny_parts > mesh.n_elements:
        raise PartitionError(nx_parts * ny_parts, mesh.n_elements)
    centroids = mesh.vertices[mesh.triangles].mean(axis=1)
    lo = mesh.vertices.min(axis=0)
    extent = mesh.vertices.max(axis=0) - lo
    rel = (centroids - lo) / extent
    ix = np.minimum((rel[:, 0] * nx_parts).astype(np.int64), nx_parts - 1)
    iy = np.minimum((rel[:, 1] * ny_parts).astype(np.int64), ny_parts - 1)
    return _owners_only(ix + nx_parts * iy, nx_parts * ny_parts)


def extend_overlap(
    decomp: Decomposition, mesh_or_graph: Mesh | nx.Graph, k: int
) -> Decomposition:
    """Grow every subdomain by ``k`` layers of neighbouring elements.

    :param mesh_or_graph: a mesh (elements joined across shared vertices) or an
        element adjacency graph
    """

    if k < 0:
        raise ValueError(f"Overlap must be nonnegative, got {k}")
    graph = _as_graph(mesh_or_graph, "vertex")
    element_sets = []
    for owned in decomp.owned_elements:
        grown = set(int(e) for e in owned)
        layer = set(grown)
        for _ in range(k):
            layer = {
                v for e in layer for v in graph.neighbors(e) if v not in grown
            }
            grown |= layer
        element_sets.append(np.array(sorted(grown), dtype=np.int64))
    return Decomposition(
        n_subdomains=decomp.n_subdomains,
        owner_of_element=decomp.owner_of_element,
        element_sets=tuple(element_sets),
        overlap=decomp.overlap + k,
        element_dofs=decomp.element_dofs,
        n_dofs=decomp.n_dofs,
        dirichlet_dofs=decomp.dirichlet_dofs,
    )


def matrix_graph(K: SparseMatrix) -> nx.Graph:
    """Symmetrized adjacency graph of a square matrix (self loops removed)."""

    coo = (abs(K) + abs(K.T)).tocoo()
    graph = nx.Graph()
    graph.add_nodes_from(range(K.shape[0]))
    graph.add_edges_from(
        (int(i), int(j)) for i, j in zip(coo.row, coo.col) if i != j
    )
    return graph


def decompose_matrix_graph(
    K: SparseMatrix,
    n_parts: int,
    overlap: int = 1,
    seed: int = 0,
    dirichlet_dofs: NDArray[np.int64] | None = None,
) -> Decomposition:
    """Decompose an operator without mesh information.

    Each row acts as an element whose DoFs are its stencil (the row and its matrix
    neighbours), so neighbouring subdomains share a layer of DoFs. Overlap grows by
    graph distance.
    """

    graph = matrix_graph(K)
    owners = partition_elements(graph, n_parts, seed)
    stencils = tuple(
        np.array(sorted([v, *graph.neighbors(v)]), dtype=np.int64)
        for v in range(K.shape[0])
    )
    attached = owners.with_dofs(stencils, K.shape[0], dirichlet_dofs)
    decomp = extend_overlap(attached, graph, overlap)
    if n_parts > 1 and decomp.interface_dofs.size == 0:
        log.warning(
            "%d subdomains share no DoFs; a two-level coarse space will be empty",
            n_parts,
        )
    return decomp
