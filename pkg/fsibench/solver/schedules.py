"""
Inflow schedules.

``RampPlateau`` ramps the flow rate linearly to its plateau value and holds it.
``RampPlateauPulse`` adds a half-sine pulse after the plateau, standing in for the
systolic part of a heart beat.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Protocol

SCHEDULES: tuple[str, ...] = ("ramp_plateau", "ramp_plateau_pulse")


class Schedule(Protocol):
    ramp_time: float

    def __call__(self, t: float) -> float:
        ...


@dataclass(frozen=True)
class RampPlateau:
    flow_rate: float
    ramp_time: float = 0.1
    plateau_time: float = 0.1

    def __post_init__(self) -> None:
        if self.ramp_time < 0.0 or self.plateau_time < 0.0:
            raise ValueError("Schedule phases must have nonnegative length")

    @property
    def duration(self) -> float:
        return self.ramp_time + self.plateau_time

    def ramp(self, t: float) -> float:
        """Ramp factor in ``[0, 1]``."""

        if self.ramp_time == 0.0:
            return 1.0
        return min(max(t / self.ramp_time, 0.0), 1.0)

    def __call__(self, t: float) -> float:
        return self.flow_rate * self.ramp(t)


@dataclass(frozen=True)
class RampPlateauPulse(RampPlateau):
    pulse_time: float = 0.2
    pulse_peak: float = 1.5

    @property
    def duration(self) -> float:
        return self.ramp_time + self.plateau_time + self.pulse_time

    def __call__(self, t: float) -> float:
        start = self.ramp_time + self.plateau_time
        if start < t < start + self.pulse_time:
            phase = math.sin(math.pi * (t - start) / self.pulse_time)
            return self.flow_rate * (1.0 + (self.pulse_peak - 1.0) * phase)
        return super().__call__(t)


def make_schedule(settings: dict[str, Any], flow_rate: float) -> RampPlateau:
    """Build the schedule named by a ``[schedule]`` config section."""

    profile = settings.get("profile", "ramp_plateau")
    if profile == "ramp_plateau":
        return RampPlateau(flow_rate, settings["ramp_time"], settings["plateau_time"])
    if profile == "ramp_plateau_pulse":
        return RampPlateauPulse(
            flow_rate,
            settings["ramp_time"],
            settings["plateau_time"],
            settings["pulse_time"],
            settings["pulse_peak"],
        )
    raise ValueError(f"Unknown schedule {profile!r}, expected one of {SCHEDULES}")
