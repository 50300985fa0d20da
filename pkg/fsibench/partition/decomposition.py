"""
Element-based domain decompositions and the DoF index sets derived from them.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from fsibench.linalg import SparseMatrix, submatrix
from fsibench.utils.file import write_text_file

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import ArrayLike, NDArray

IndexSets = tuple["NDArray[np.int64]", ...]


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Nonoverlapping element ownership, overlapping element sets and DoF sets.

    :param n_subdomains: number of subdomains
    :param owner_of_element: owning subdomain of every element
    :param element_sets: overlapping element set of every subdomain (the owned
        elements when ``overlap == 0``)
    :param overlap: number of element layers added to the owned elements
    :param element_dofs: DoFs of every element, ragged; empty until DoFs are attached
    :param n_dofs: number of DoFs
    :param dirichlet_dofs: DoFs fixed by boundary conditions
    """

    n_subdomains: int
    owner_of_element: NDArray[np.int64]
    element_sets: IndexSets
    overlap: int = 0
    element_dofs: tuple[NDArray[np.int64], ...] = field(default=())
    n_dofs: int = 0
    dirichlet_dofs: NDArray[np.int64] = field(
        default_factory=lambda: np.zeros(0, np.int64)
    )

    @property
    def n_elements(self) -> int:
        return int(self.owner_of_element.size)

    @cached_property
    def owned_elements(self) -> IndexSets:
        return tuple(
            np.flatnonzero(self.owner_of_element == i) for i in range(self.n_subdomains)
        )

    def _dofs_of(self, elements: NDArray[np.int64]) -> NDArray[np.int64]:
        if not self.element_dofs:
            raise ValueError("No DoFs attached to this decomposition")
        if elements.size == 0:
            return np.zeros(0, np.int64)
        return np.unique(np.concatenate([self.element_dofs[e] for e in elements]))

    @cached_property
    def closure_dofs(self) -> IndexSets:
        """All DoFs of each subdomain's owned elements."""

        return tuple(self._dofs_of(owned) for owned in self.owned_elements)

    @cached_property
    def overlapping_dofs(self) -> IndexSets:
        """All DoFs of each subdomain's overlapping element set."""

        return tuple(self._dofs_of(elements) for elements in self.element_sets)

    @cached_property
    def multiplicity(self) -> NDArray[np.int64]:
        """Number of owned-element closures containing each DoF."""

        count = np.zeros(self.n_dofs, dtype=np.int64)
        for dofs in self.closure_dofs:
            count[dofs] += 1
        return count

    @cached_property
    def nonoverlapping_dofs(self) -> IndexSets:
        """Disjoint DoF sets: a shared DoF goes to the lowest subdomain id."""

        owner = np.full(self.n_dofs, -1, dtype=np.int64)
        for i in reversed(range(self.n_subdomains)):
            owner[self.closure_dofs[i]] = i
        return tuple(np.flatnonzero(owner == i) for i in range(self.n_subdomains))

    @cached_property
    def interface_dofs(self) -> NDArray[np.int64]:
        """DoFs in the closure of two or more subdomains."""

        return np.flatnonzero(self.multiplicity >= 2)

    @cached_property
    def signatures(self) -> tuple[tuple[int, ...], ...]:
        """Subdomains whose owned closure contains each DoF."""

        members: list[list[int]] = [[] for _ in range(self.n_dofs)]
        for i, dofs in enumerate(self.closure_dofs):
            for dof in dofs:
                members[dof].append(i)
        return tuple(tuple(m) for m in members)

    def with_dofs(
        self,
        element_dofs: ArrayLike | tuple[NDArray[np.int64], ...],
        n_dofs: int,
        dirichlet_dofs: ArrayLike | None = None,
    ) -> Decomposition:
        """Attach per-element DoF lists."""

        rows = tuple(np.asarray(dofs, dtype=np.int64).ravel() for dofs in element_dofs)
        if len(rows) != self.n_elements:
            raise ValueError(
                f"Got DoFs for {len(rows)} elements, expected {self.n_elements}"
            )
        fixed = np.zeros(0) if dirichlet_dofs is None else dirichlet_dofs
        return replace(
            self,
            element_dofs=rows,
            n_dofs=int(n_dofs),
            dirichlet_dofs=np.unique(np.asarray(fixed, dtype=np.int64)),
        )


def restrict_matrix(K: SparseMatrix, decomp: Decomposition, i: int) -> SparseMatrix:
    """Local overlapping matrix ``K_i = R_i K R_i^T``."""

    dofs = decomp.overlapping_dofs[i]
    return submatrix(K, dofs, dofs)


def restrict_to_dofs(decomp: Decomposition, keep: ArrayLike) -> Decomposition:
    """Renumber a decomposition onto a subset of its DoFs.

    DoFs outside ``keep`` are dropped from every element; ``keep[j]`` becomes DoF ``j``.
    Subdomains left without DoFs are removed and the rest renumbered in order.
    """

    kept = np.asarray(keep, dtype=np.int64)
    new_index = np.full(decomp.n_dofs, -1, dtype=np.int64)
    new_index[kept] = np.arange(kept.size)
    rows = []
    for dofs in decomp.element_dofs:
        mapped = new_index[dofs]
        rows.append(mapped[mapped >= 0])
    has_dofs = np.array([r.size > 0 for r in rows], dtype=bool)

    alive = [
        i
        for i in range(decomp.n_subdomains)
        if has_dofs[decomp.owned_elements[i]].any()
    ]
    relabel = np.full(decomp.n_subdomains, -1, dtype=np.int64)
    relabel[alive] = np.arange(len(alive))
    # Elements without DoFs stay in the element count but belong to no subdomain
    previous = decomp.owner_of_element
    owner = np.where(
        (previous >= 0) & has_dofs, relabel[np.maximum(previous, 0)], -1
    )
    element_sets = tuple(
        decomp.element_sets[i][has_dofs[decomp.element_sets[i]]] for i in alive
    )
    dirichlet = new_index[decomp.dirichlet_dofs]
    restricted = Decomposition(
        n_subdomains=len(alive),
        owner_of_element=owner,
        element_sets=element_sets,
        overlap=decomp.overlap,
    )
    return restricted.with_dofs(tuple(rows), kept.size, dirichlet[dirichlet >= 0])


def export_decomposition(decomp: Decomposition, path: Path) -> None:
    """Write DoF owners and overlapping DoF lists as plain text."""

    owner = np.full(decomp.n_dofs, -1, dtype=np.int64)
    for i, dofs in enumerate(decomp.nonoverlapping_dofs):
        owner[dofs] = i
    lines = [f"subdomains {decomp.n_subdomains} overlap {decomp.overlap}", "dof owner"]
    lines += [f"{dof} {o}" for dof, o in enumerate(owner)]
    for i, dofs in enumerate(decomp.overlapping_dofs):
        lines.append(f"overlap {i}: " + " ".join(str(d) for d in dofs))
    write_text_file(path, "\n".join(lines) + "\n")


def induce_field(
    decomp: Decomposition,
    elements: ArrayLike,
    element_dofs: ArrayLike,
    n_dofs: int,
    dirichlet_dofs: ArrayLike | None = None,
) -> Decomposition:
    """Attach the DoFs of one field living on a subset of the mesh elements.

    Elements outside the field carry no DoFs; subdomains without field DoFs are
    dropped.
    """

    rows: list[NDArray[np.int64]] = [np.zeros(0, np.int64)] * decomp.n_elements
    for e, dofs in zip(np.asarray(elements), np.asarray(element_dofs)):
        rows[int(e)] = np.asarray(dofs, dtype=np.int64).ravel()
    attached = decomp.with_dofs(tuple(rows), n_dofs, dirichlet_dofs)
    return restrict_to_dofs(attached, np.arange(n_dofs))
