"""
Structured triangle meshes of the flexible channel.

The fluid strip ``[0, L] x [0, h]`` lies below the solid wall ``[0, L] x [h, h + t]``.
The bottom edge is the symmetry line of the vessel, the top edge is the outer wall, and
the solid wall is clamped at both ends.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import networkx as nx
import numpy as np

from fsibench.utils.file import write_text_file

from .exceptions import MeshError

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import NDArray

FLUID: int = 0
SOLID: int = 1

REGION_NAMES: dict[int, str] = {FLUID: "fluid", SOLID: "solid"}

BOUNDARY_TAGS: tuple[str, ...] = (
    "inlet",
    "outlet",
    "wall_outer",
    "symmetry",
    "interface",
    "clamp",
)

# Default tag of each side of a rectangle mesh
RECTANGLE_SIDE_TAGS: dict[str, str] = {
    "left": "inlet",
    "right": "outlet",
    "bottom": "symmetry",
    "top": "wall_outer",
}

Edge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming triangle mesh with region and boundary tags.

    Triangles are stored counter-clockwise. Edge keys are sorted vertex pairs.
    """

    vertices: NDArray[np.float64]
    triangles: NDArray[np.int64]
    region: NDArray[np.int8]
    boundary_tags: dict[Edge, str] = field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_elements(self) -> int:
        return int(self.triangles.shape[0])

    @cached_property
    def edges(self) -> NDArray[np.int64]:
        """Unique sorted edges, ordered lexicographically."""

        local = self.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
        return np.unique(np.sort(local, axis=1), axis=0)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {(int(a), int(b)): i for i, (a, b) in enumerate(self.edges)}

    @cached_property
    def element_edges(self) -> NDArray[np.int64]:
        """Edge ids of the local edges (v0 v1), (v1 v2), (v2 v0) of every triangle."""

        out = np.empty((self.n_elements, 3), dtype=np.int64)
        for e, tri in enumerate(self.triangles):
            for k, (a, b) in enumerate(((0, 1), (1, 2), (2, 0))):
                key = tuple(sorted((int(tri[a]), int(tri[b]))))
                out[e, k] = self.edge_index[key]  # type: ignore[index]
        return out

    @cached_property
    def edge_elements(self) -> dict[int, tuple[int, ...]]:
        """Triangles adjoining each edge id."""

        adjoining: dict[int, list[int]] = {}
        for e, row in enumerate(self.element_edges):
            for edge in row:
                adjoining.setdefault(int(edge), []).append(e)
        return {edge: tuple(elements) for edge, elements in adjoining.items()}

    @property
    def n_nodes(self) -> int:
        """Number of quadratic nodes: vertices followed by edge midpoints."""

        return self.n_vertices + int(self.edges.shape[0])

    @cached_property
    def element_nodes(self) -> NDArray[np.int64]:
        """Quadratic element nodes in local order v0, v1, v2, m01, m12, m20."""

        return np.hstack([self.triangles, self.n_vertices + self.element_edges])

    @cached_property
    def node_coordinates(self) -> NDArray[np.float64]:
        midpoints = 0.5 * (
            self.vertices[self.edges[:, 0]] + self.vertices[self.edges[:, 1]]
        )
        return np.vstack([self.vertices, midpoints])

    def elements_in(self, region: int) -> NDArray[np.int64]:
        return np.flatnonzero(self.region == region)

    def tagged_edges(self, tag: str) -> list[Edge]:
        return sorted(edge for edge, name in self.boundary_tags.items() if name == tag)

    def tag_nodes(self, tag: str, *, quadratic: bool = True) -> NDArray[np.int64]:
        """Sorted node ids lying on edges with the given tag."""

        nodes: set[int] = set()
        for a, b in self.tagged_edges(tag):
            nodes.update((a, b))
            if quadratic:
                nodes.add(self.n_vertices + self.edge_index[(a, b)])
        return np.array(sorted(nodes), dtype=np.int64)


def _vertex_id(i: int, j: int, nx_cells: int) -> int:
    return j * (nx_cells + 1) + i


def _triangulate(
    xs: NDArray[np.float64], ys: NDArray[np.float64], region_of_row: list[int]
) -> tuple[NDArray[np.float64], NDArray[np.int64], NDArray[np.int8]]:
    """Split every quad of a tensor grid along its v00-v11 diagonal."""

    nx_cells = xs.size - 1
    grid_x, grid_y = np.meshgrid(xs, ys)
    vertices = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    triangles: list[tuple[int, int, int]] = []
    region: list[int] = []
    for j in range(ys.size - 1):
        for i in range(nx_cells):
            v00 = _vertex_id(i, j, nx_cells)
            v10 = _vertex_id(i + 1, j, nx_cells)
            v11 = _vertex_id(i + 1, j + 1, nx_cells)
            v01 = _vertex_id(i, j + 1, nx_cells)
            triangles += [(v00, v10, v11), (v00, v11, v01)]
            region += [region_of_row[j]] * 2
    return (
        vertices,
        np.array(triangles, dtype=np.int64),
        np.array(region, dtype=np.int8),
    )


def _side_edges(
    nx_cells: int, ny_cells: int
) -> dict[str, list[tuple[Edge, int]]]:
    """Boundary edges of a tensor grid with the row or column they sit on."""

    sides: dict[str, list[tuple[Edge, int]]] = {
        "left": [],
        "right": [],
        "bottom": [],
        "top": [],
    }
    for j in range(ny_cells):
        for side, i in (("left", 0), ("right", nx_cells)):
            a, b = _vertex_id(i, j, nx_cells), _vertex_id(i, j + 1, nx_cells)
            sides[side].append(((min(a, b), max(a, b)), j))
    for i in range(nx_cells):
        for side, j in (("bottom", 0), ("top", ny_cells)):
            a, b = _vertex_id(i, j, nx_cells), _vertex_id(i + 1, j, nx_cells)
            sides[side].append(((min(a, b), max(a, b)), i))
    return sides


def build_channel_mesh(
    nx: int,
    ny_fluid: int,
    ny_solid: int,
    length: float,
    lumen_height: float,
    wall_thickness: float,
) -> Mesh:
    """Build the structured flexible-channel mesh.

    :param nx: cells along the channel
    :param ny_fluid: cell rows across the lumen
    :param ny_solid: cell rows across the wall
    :param length: channel length (cm)
    :param lumen_height: height of the fluid strip (cm)
    :param wall_thickness: thickness of the solid strip (cm)
    :return: the mesh, with inlet/outlet on the fluid ends, clamp on the solid ends,
        interface at ``y = lumen_height``
    """

    if min(nx, ny_fluid, ny_solid) < 1:
        raise MeshError(f"Cell counts must be positive, got {(nx, ny_fluid, ny_solid)}")
    if min(length, lumen_height, wall_thickness) <= 0.0:
        raise MeshError(
            "Channel dimensions must be positive, got "
            f"{(length, lumen_height, wall_thickness)}"
        )

    xs = np.linspace(0.0, length, nx + 1)
    ys = np.concatenate(
        [
            np.linspace(0.0, lumen_height, ny_fluid + 1),
            np.linspace(lumen_height, lumen_height + wall_thickness, ny_solid + 1)[1:],
        ]
    )
    rows = [FLUID] * ny_fluid + [SOLID] * ny_solid
    vertices, triangles, region = _triangulate(xs, ys, rows)

    tags: dict[Edge, str] = {}
    sides = _side_edges(nx, ny_fluid + ny_solid)
    for side, fluid_tag in (("left", "inlet"), ("right", "outlet")):
        for edge, j in sides[side]:
            tags[edge] = fluid_tag if rows[j] == FLUID else "clamp"
    for edge, _ in sides["bottom"]:
        tags[edge] = "symmetry"
    for edge, _ in sides["top"]:
        tags[edge] = "wall_outer"
    for i in range(nx):
        a, b = _vertex_id(i, ny_fluid, nx), _vertex_id(i + 1, ny_fluid, nx)
        tags[(a, b)] = "interface"

    return Mesh(vertices, triangles, region, dict(sorted(tags.items())))


def build_rectangle_mesh(
    nx: int,
    ny: int,
    width: float = 1.0,
    height: float = 1.0,
    tags: dict[str, str] | None = None,
) -> Mesh:
    """Build a structured single-region rectangle.

    :param tags: boundary tag per side (``left``, ``right``, ``bottom``, ``top``);
        sides left out stay untagged
    """

    if min(nx, ny) < 1:
        raise MeshError(f"Cell counts must be positive, got {(nx, ny)}")
    if min(width, height) <= 0.0:
        raise MeshError(f"Rectangle dimensions must be positive, got {(width, height)}")
    side_tags = RECTANGLE_SIDE_TAGS if tags is None else tags
    unknown = set(side_tags.values()) - set(BOUNDARY_TAGS)
    if unknown:
        raise MeshError(f"Unknown boundary tags {sorted(unknown)}")

    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    vertices, triangles, region = _triangulate(xs, ys, [FLUID] * ny)
    boundary: dict[Edge, str] = {}
    for side, edges in _side_edges(nx, ny).items():
        if side in side_tags:
            for edge, _ in edges:
                boundary[edge] = side_tags[side]
    return Mesh(vertices, triangles, region, dict(sorted(boundary.items())))


def mesh_edges(mesh: Mesh) -> NDArray[np.int64]:
    """All unique edges of the mesh as sorted vertex pairs."""

    return mesh.edges


def element_graph(
    mesh: Mesh, by: str = "edge", elements: NDArray[np.int64] | None = None
) -> nx.Graph:
    """Element adjacency graph.

    :param by: ``"edge"`` joins triangles sharing an edge, ``"vertex"`` joins triangles
        sharing at least one vertex
    :param elements: restrict the graph to these element ids
    """

    if by not in ("edge", "vertex"):
        raise ValueError(f"Unknown adjacency {by!r}")
    chosen = np.arange(mesh.n_elements) if elements is None else np.asarray(elements)
    graph = nx.Graph()
    graph.add_nodes_from(int(e) for e in chosen)
    keys = mesh.element_edges if by == "edge" else mesh.triangles
    incident: dict[int, list[int]] = {}
    for e in chosen:
        for key in keys[e]:
            incident.setdefault(int(key), []).append(int(e))
    for members in incident.values():
        for a_pos, a in enumerate(members):
            for b in members[a_pos + 1 :]:
                graph.add_edge(a, b)
    return graph


def export_mesh(mesh: Mesh, path: Path) -> None:
    """Write the mesh as plain ASCII node and element lists."""

    lines = [f"vertices {mesh.n_vertices}"]
    lines += [f"{i} {x!r} {y!r}" for i, (x, y) in enumerate(mesh.vertices)]
    lines.append(f"triangles {mesh.n_elements}")
    lines += [
        f"{e} {a} {b} {c} {REGION_NAMES[int(r)]}"
        for e, ((a, b, c), r) in enumerate(zip(mesh.triangles, mesh.region))
    ]
    lines.append(f"boundary_edges {len(mesh.boundary_tags)}")
    lines += [f"{a} {b} {tag}" for (a, b), tag in mesh.boundary_tags.items()]
    write_text_file(path, "\n".join(lines) + "\n")
