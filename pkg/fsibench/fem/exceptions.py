"""
This file contains the finite element exceptions.
"""

from __future__ import annotations

from typing import Any


class MeshError(Exception):
    """Exception raised upon degenerate mesh dimensions or inconsistent topology."""


class AssemblyError(Exception):
    """Exception raised when an element cannot be mapped to the reference triangle."""

    def __init__(self, element: int, det: float, *args: Any) -> None:
        super().__init__(*args)
        self.element: int = element
        self.det: float = det

    def __str__(self) -> str:
        return (
            f"Element {self.element} is inverted or degenerate "
            f"(Jacobian determinant {self.det:.3e})"
        )


class CouplingError(Exception):
    """Exception raised when the interface DoFs of two fields cannot be paired."""
