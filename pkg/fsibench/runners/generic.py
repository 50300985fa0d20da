"""
Generic runner for jobs whose failure must not stop the caller.
"""
from __future__ import annotations

import sys
import time
import traceback
from enum import Enum, auto
from typing import TYPE_CHECKING, Any

from fsibench.utils.log import logger

if TYPE_CHECKING:
    from collections.abc import Callable

log = logger(__name__)

RunnerError = tuple[type[BaseException], BaseException, str]


class RunnerKilledException(Exception):
    """Exception raised when a runner is killed."""

    def __init__(self, msg: str = "Runner has been killed."):
        super().__init__(msg)


class RunnerStatus(Enum):
    """Enum for runner status flags."""

    PENDING = auto()
    RUNNING = auto()
    KILLED = auto()
    FAILED = auto()
    FINISHED = auto()


class GenericRunner:
    """Run a job, keeping its result or the error it raised.

    Callbacks take the place of signals: ``on_progress(done, total)`` after each call
    to :meth:`advance`, ``on_result(value)`` on success and ``on_error(error)`` with
    the exception type, value and formatted traceback on failure.
    """

    def __init__(
        self,
        func: Callable[[], Any],
        *,
        on_progress: Callable[[int, int], None] | None = None,
        on_result: Callable[[Any], None] | None = None,
        on_error: Callable[[RunnerError], None] | None = None,
    ):
        self.fn: Callable[[], Any] = func
        self.on_progress = on_progress
        self.on_result = on_result
        self.on_error = on_error

        self.worker_status: RunnerStatus = RunnerStatus.PENDING
        self.result_value: Any = None
        self.error: RunnerError | None = None
        self.elapsed_s: float = 0.0

        # By default, progress is out of 100
        self._max_progress: int = 100
        self._progress: int = 0

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def run(self) -> None:
        """Call the job once, capturing any exception it raises."""

        if self.worker_status is RunnerStatus.KILLED:
            log.warning("%s was killed before it started", self.name)
            return
        self.worker_status = RunnerStatus.RUNNING
        start = time.perf_counter()
        try:
            result: Any = self.fn()
        except Exception:  # pylint: disable=broad-except
            exc_type, value = sys.exc_info()[:2]
            assert exc_type is not None and value is not None
            self.error = (exc_type, value, traceback.format_exc())
            self.worker_status = RunnerStatus.FAILED
            log.error("%s failed: %s", self.name, value)
            log.debug(self.error[2])
            if self.on_error is not None:
                self.on_error(self.error)
        else:
            self.set_result(result)
        finally:
            self.elapsed_s = time.perf_counter() - start

    def check_status(self) -> None:
        """Raise inside the job if the runner was killed meanwhile."""

        if self.worker_status is RunnerStatus.KILLED:
            raise RunnerKilledException

    def set_max_progress(self, max_progress: int) -> None:
        """Set the max progress of the runner."""

        if isinstance(max_progress, int) and (max_progress > 0):
            self._max_progress = max_progress
        else:
            raise TypeError("max progress must be a positive integer.")

    def get_max_progress(self) -> int:
        """Get the max progress of the runner."""

        return self._max_progress

    def advance(self, steps: int = 1) -> None:
        """Move the progress counter and report it."""

        self._progress = min(self._progress + steps, self._max_progress)
        if self.on_progress is not None:
            self.on_progress(self._progress, self._max_progress)

    def kill(self) -> None:
        """Kill the runner."""

        log.info("%s killed.", self.name)
        self.worker_status = RunnerStatus.KILLED

    def set_result(self, result: Any) -> None:
        """Set the result of the runner and finish."""

        log.debug("%s result set: %s", self.name, result)
        self.result_value = result
        self.worker_status = RunnerStatus.FINISHED
        if self.on_result is not None:
            self.on_result(result)

    @property
    def failed(self) -> bool:
        return self.worker_status is RunnerStatus.FAILED
