"""
This file contains the Schwarz preconditioner exceptions.
"""

from __future__ import annotations

from typing import Any


class SubdomainSolveError(Exception):
    """Exception raised when a subdomain matrix cannot be factorized."""

    def __init__(self, subdomain: int, stage: str = "local solve", *args: Any) -> None:
        super().__init__(*args)
        self.subdomain: int = subdomain
        self.stage: str = stage

    def __str__(self) -> str:
        return f"Singular matrix in subdomain {self.subdomain} ({self.stage})"


class CoarseSpaceError(Exception):
    """Exception raised when a coarse basis is empty or its Galerkin matrix singular."""
