"""
This file contains the FaCSI exceptions.
"""

from __future__ import annotations

from typing import Any


class FacsiStageError(Exception):
    """Exception raised when one stage of FaCSI fails to build or apply."""

    def __init__(self, stage: str, *args: Any) -> None:
        super().__init__(*args)
        self.stage: str = stage

    def __str__(self) -> str:
        detail = f": {self.args[0]}" if self.args else ""
        return f"FaCSI stage {self.stage} failed{detail}"
