"""
Near-nullspace vectors the coarse spaces are built from.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray


def constant_nullspace(n_dofs: int) -> NDArray[np.float64]:
    """Constants of a scalar operator such as the Laplacian."""

    return np.ones((n_dofs, 1))


def translation_nullspace(n_dofs: int, n_components: int = 2) -> NDArray[np.float64]:
    """Rigid translations of an interleaved vector field."""

    if n_dofs % n_components:
        raise ValueError(f"{n_dofs} DoFs do not split into {n_components} components")
    modes = np.zeros((n_dofs, n_components))
    for c in range(n_components):
        modes[c::n_components, c] = 1.0
    return modes


def elasticity_nullspace(coordinates: ArrayLike) -> NDArray[np.float64]:
    """Translations and the infinitesimal rotation of a 2D interleaved field.

    The rotation is taken about the centroid of the nodes so that it stays well
    separated from the translations.

    :param coordinates: node coordinates, one row per node
    """

    xy = np.asarray(coordinates, dtype=float)
    centred = xy - xy.mean(axis=0)
    modes = translation_nullspace(2 * len(xy))
    rotation = np.zeros(2 * len(xy))
    rotation[0::2] = -centred[:, 1]
    rotation[1::2] = centred[:, 0]
    return np.column_stack([modes, rotation])


def embed_nullspace(
    modes: NDArray[np.float64], dofs: ArrayLike, n_dofs: int
) -> NDArray[np.float64]:
    """Place field modes at ``dofs`` of a larger numbering, zero elsewhere."""

    out = np.zeros((n_dofs, modes.shape[1]))
    out[np.asarray(dofs, dtype=np.int64)] = modes
    return out
