"""
Named segments of a flat vector.

Unknowns and residuals of the coupled problem are partitioned into the solid,
geometry, fluid velocity, fluid pressure and interface multiplier fields, in that
order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .exceptions import DimensionMismatch

if TYPE_CHECKING:
    from collections.abc import Iterator

    from numpy.typing import ArrayLike, NDArray

SEGMENT_NAMES: tuple[str, ...] = (
    "solid",
    "geometry",
    "fluid_velocity",
    "fluid_pressure",
    "interface",
)


@dataclass(frozen=True, eq=False)
class BlockVector:
    """An ordered, immutable set of named vector segments."""

    segments: tuple[tuple[str, NDArray[np.float64]], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.segments]
        if len(set(names)) != len(names):
            raise ValueError(f"Segment names must be unique, got {names}")
        unknown = set(names) - set(SEGMENT_NAMES)
        if unknown:
            raise ValueError(f"Unknown segment names {sorted(unknown)}")

    @classmethod
    def from_segments(cls, **segments: ArrayLike) -> BlockVector:
        """Build from keyword segments, kept in the canonical field order.

        :raises ValueError: for a name outside the five fields
        """

        unknown = set(segments) - set(SEGMENT_NAMES)
        if unknown:
            raise ValueError(f"Unknown segment names {sorted(unknown)}")
        ordered = tuple(
            (name, np.array(segments[name], dtype=float).ravel())
            for name in SEGMENT_NAMES
            if name in segments
        )
        return cls(ordered)

    @classmethod
    def zeros(cls, layout: dict[str, int]) -> BlockVector:
        """A zero vector with the given segment sizes."""

        return cls.from_segments(**{name: np.zeros(n) for name, n in layout.items()})

    @classmethod
    def from_array(cls, layout: dict[str, int], x: ArrayLike) -> BlockVector:
        """Split a flat vector according to a segment layout."""

        flat = np.asarray(x, dtype=float).ravel()
        total = sum(layout.values())
        if flat.size != total:
            raise DimensionMismatch(total, flat.size)
        parts: dict[str, NDArray[np.float64]] = {}
        start = 0
        for name in SEGMENT_NAMES:
            if name in layout:
                parts[name] = flat[start : start + layout[name]].copy()
                start += layout[name]
        return cls.from_segments(**parts)

    @property
    def layout(self) -> dict[str, int]:
        """Segment sizes by name."""

        return {name: values.size for name, values in self.segments}

    def __len__(self) -> int:
        return sum(values.size for _, values in self.segments)

    def __iter__(self) -> Iterator[tuple[str, NDArray[np.float64]]]:
        return iter(self.segments)

    def __getitem__(self, name: str) -> NDArray[np.float64]:
        for key, values in self.segments:
            if key == name:
                return values
        raise KeyError(name)

    def to_array(self) -> NDArray[np.float64]:
        """Concatenate all segments in order."""

        if not self.segments:
            return np.zeros(0)
        return np.concatenate([values for _, values in self.segments])

    def replace(self, **updates: ArrayLike) -> BlockVector:
        """Return a copy with some segments replaced (sizes must not change)."""

        parts: dict[str, ArrayLike] = {}
        for name, values in self.segments:
            if name in updates:
                new = np.asarray(updates[name], dtype=float).ravel()
                if new.size != values.size:
                    raise DimensionMismatch(values.size, new.size)
                parts[name] = new
            else:
                parts[name] = values
        missing = set(updates) - set(parts)
        if missing:
            raise KeyError(f"No segments named {sorted(missing)}")
        return BlockVector.from_segments(**parts)

    def fluid(self) -> NDArray[np.float64]:
        """The coupled fluid vector: velocity followed by pressure."""

        return np.concatenate([self["fluid_velocity"], self["fluid_pressure"]])
