"""
Runner for one acceptance check.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Any

from .generic import GenericRunner

if TYPE_CHECKING:
    from collections.abc import Callable

CheckOutcome = tuple[bool, str]


class CheckRunner(GenericRunner):
    """Run a check returning ``(passed, detail)``; a raised exception fails it."""

    def __init__(self, check_name: str, check: Callable[[], CheckOutcome], **kw: Any):
        super().__init__(check, **kw)
        self.check_name = check_name

    @property
    def name(self) -> str:
        return f"{self.__class__.__name__}[{self.check_name}]"

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.result_value[0])

    @property
    def detail(self) -> str:
        if self.error is not None:
            exc_type, value, _ = self.error
            return f"raised {exc_type.__name__}: {value}"
        return str(self.result_value[1])
