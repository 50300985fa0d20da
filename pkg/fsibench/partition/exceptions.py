"""
This file contains the partitioning exceptions.
"""

from __future__ import annotations

from typing import Any


class PartitionError(Exception):
    """Exception raised when a graph cannot be split into the requested parts."""

    def __init__(self, n_parts: int, n_elements: int, *args: Any) -> None:
        super().__init__(*args)
        self.n_parts: int = n_parts
        self.n_elements: int = n_elements

    def __str__(self) -> str:
        detail = f": {self.args[0]}" if self.args else ""
        return (
            f"Cannot split {self.n_elements} elements into {self.n_parts} "
            f"subdomains{detail}"
        )
