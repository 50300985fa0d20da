"""
Reference triangle: quadrature, Taylor-Hood shape functions and element geometry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .exceptions import AssemblyError
from .mesh import Mesh

# Seven-point rule, exact for polynomials of degree five
_A1, _B1, _W1 = 0.059715871789770, 0.470142064105115, 0.132394152788506
_A2, _B2, _W2 = 0.797426985353087, 0.101286507323456, 0.125939180544827

BARYCENTRIC_POINTS: NDArray[np.float64] = np.array(
    [
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        [_A1, _B1, _B1],
        [_B1, _A1, _B1],
        [_B1, _B1, _A1],
        [_A2, _B2, _B2],
        [_B2, _A2, _B2],
        [_B2, _B2, _A2],
    ]
)
# Weights sum to one; scaled by the reference area below
QUADRATURE_WEIGHTS: NDArray[np.float64] = 0.5 * np.array(
    [0.225, _W1, _W1, _W1, _W2, _W2, _W2]
)

# d(L1, L2, L3) / d(xi, eta)
_DL: NDArray[np.float64] = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
_MIDPOINT_PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (1, 2), (2, 0))


def p2_values(bary: NDArray[np.float64]) -> NDArray[np.float64]:
    """Quadratic shape functions at barycentric points, shape (q, 6)."""

    L = bary
    vertex = L * (2.0 * L - 1.0)
    mids = np.column_stack([4.0 * L[:, i] * L[:, j] for i, j in _MIDPOINT_PAIRS])
    return np.hstack([vertex, mids])


def p2_gradients(bary: NDArray[np.float64]) -> NDArray[np.float64]:
    """Reference gradients of the quadratic shape functions, shape (q, 6, 2)."""

    L = bary
    out = np.empty((L.shape[0], 6, 2))
    for i in range(3):
        out[:, i, :] = (4.0 * L[:, i] - 1.0)[:, None] * _DL[i]
    for k, (i, j) in enumerate(_MIDPOINT_PAIRS):
        out[:, 3 + k, :] = 4.0 * (L[:, i, None] * _DL[j] + L[:, j, None] * _DL[i])
    return out


def p1_values(bary: NDArray[np.float64]) -> NDArray[np.float64]:
    return bary.copy()


def p1_gradients(bary: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.broadcast_to(_DL, (bary.shape[0], 3, 2)).copy()


@dataclass(frozen=True, eq=False)
class ElementGeometry:
    """Affine maps of a set of triangles evaluated at the quadrature points.

    ``weights[e, q]`` are physical quadrature weights, ``grad_p2[e, q, a, i]`` and
    ``grad_p1[e, q, a, i]`` physical shape function gradients.
    """

    elements: NDArray[np.int64]
    det: NDArray[np.float64]
    weights: NDArray[np.float64]
    values_p2: NDArray[np.float64]
    values_p1: NDArray[np.float64]
    grad_p2: NDArray[np.float64]
    grad_p1: NDArray[np.float64]


def element_geometry(mesh: Mesh, elements: NDArray[np.int64]) -> ElementGeometry:
    """Evaluate the affine element maps.

    :raises AssemblyError: for the first element whose Jacobian determinant is not
        positive
    """

    tri = mesh.vertices[mesh.triangles[elements]]
    # J[e, i, j] = d x_i / d xi_j
    J = np.stack([tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]], axis=2)
    det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
    bad = np.flatnonzero(~(det > 0.0))
    if bad.size:
        raise AssemblyError(int(elements[bad[0]]), float(det[bad[0]]))
    inv = np.empty_like(J)
    inv[:, 0, 0] = J[:, 1, 1] / det
    inv[:, 1, 1] = J[:, 0, 0] / det
    inv[:, 0, 1] = -J[:, 0, 1] / det
    inv[:, 1, 0] = -J[:, 1, 0] / det

    ref_p2 = p2_gradients(BARYCENTRIC_POINTS)
    ref_p1 = p1_gradients(BARYCENTRIC_POINTS)
    return ElementGeometry(
        elements=np.asarray(elements, dtype=np.int64),
        det=det,
        weights=det[:, None] * QUADRATURE_WEIGHTS[None, :],
        values_p2=p2_values(BARYCENTRIC_POINTS),
        values_p1=p1_values(BARYCENTRIC_POINTS),
        grad_p2=np.einsum("eji,qaj->eqai", inv, ref_p2),
        grad_p1=np.einsum("eji,qaj->eqai", inv, ref_p1),
    )


def edge_weights(mesh: Mesh, a: int, b: int) -> tuple[float, float, float]:
    """Simpson weights of the quadratic edge nodes (a, b, midpoint)."""

    L = float(np.linalg.norm(mesh.vertices[b] - mesh.vertices[a]))
    return L / 6.0, L / 6.0, 2.0 * L / 3.0


def outward_normal(mesh: Mesh, a: int, b: int) -> NDArray[np.float64]:
    """Unit normal of a boundary edge pointing away from its adjoining triangle."""

    edge_id = mesh.edge_index[(min(a, b), max(a, b))]
    (element,) = mesh.edge_elements[edge_id][:1]
    tangent = mesh.vertices[b] - mesh.vertices[a]
    normal = np.array([tangent[1], -tangent[0]]) / np.linalg.norm(tangent)
    centroid = mesh.vertices[mesh.triangles[element]].mean(axis=0)
    if np.dot(normal, mesh.vertices[a] - centroid) < 0.0:
        normal = -normal
    return normal
