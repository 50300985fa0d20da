"""
Iteration counts and timings of a run.

The per-Newton-step CSV has one row per Newton step (a time step that needed no
Newton step gets a single row with ``newton_idx = 0``), so every average in a report
can be recomputed from it.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from fsibench.utils.file import write_text_file

if TYPE_CHECKING:
    from pathlib import Path

CSV_HEADER: tuple[str, ...] = (
    "timestep",
    "newton_idx",
    "eta",
    "gmres_iters",
    "rel_residual",
    "setup_s",
    "solve_s",
)


@dataclass(frozen=True)
class NewtonStepStats:
    newton_idx: int
    eta: float
    gmres_iters: int
    rel_residual: float
    setup_s: float
    solve_s: float
    gmres_converged: bool = True
    residual_history: tuple[float, ...] = ()


@dataclass
class TimestepStats:
    """Newton steps of one time step and the quantities monitored after it."""

    timestep: int
    time: float = 0.0
    steps: list[NewtonStepStats] = field(default_factory=list)
    converged: bool = True
    monitors: dict[str, float] = field(default_factory=dict)

    @property
    def newton_iters(self) -> int:
        return len(self.steps)

    @property
    def gmres_iters(self) -> int:
        return sum(step.gmres_iters for step in self.steps)

    @property
    def avg_gmres(self) -> float:
        """Average GMRES iterations per Newton step (0 without Newton steps)."""

        return self.gmres_iters / self.newton_iters if self.steps else 0.0

    @property
    def setup_s(self) -> float:
        return sum(step.setup_s for step in self.steps)

    @property
    def solve_s(self) -> float:
        return sum(step.solve_s for step in self.steps)


@dataclass
class SolveStats:
    per_timestep: list[TimestepStats] = field(default_factory=list)

    def add(self, timestep: TimestepStats) -> None:
        self.per_timestep.append(timestep)

    @property
    def n_timesteps(self) -> int:
        return len(self.per_timestep)

    @property
    def avg_gmres_per_newton(self) -> float:
        """Average over time steps of the average GMRES count per Newton step.

        Time steps without Newton steps do not enter the average.
        """

        active = [t.avg_gmres for t in self.per_timestep if t.steps]
        return sum(active) / len(active) if active else 0.0

    @property
    def avg_newton(self) -> float:
        if not self.per_timestep:
            return 0.0
        return sum(t.newton_iters for t in self.per_timestep) / self.n_timesteps

    @property
    def setup_s(self) -> float:
        return sum(t.setup_s for t in self.per_timestep)

    @property
    def solve_s(self) -> float:
        return sum(t.solve_s for t in self.per_timestep)

    @property
    def gmres_failures(self) -> int:
        return sum(
            not step.gmres_converged for t in self.per_timestep for step in t.steps
        )

    def rows(self) -> list[tuple[int, int, float, int, float, float, float]]:
        out = []
        for t in self.per_timestep:
            if not t.steps:
                out.append((t.timestep, 0, 0.0, 0, 0.0, 0.0, 0.0))
            for s in t.steps:
                out.append(
                    (
                        t.timestep,
                        s.newton_idx,
                        s.eta,
                        s.gmres_iters,
                        s.rel_residual,
                        s.setup_s,
                        s.solve_s,
                    )
                )
        return out

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows():
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buffer.getvalue()

    def write_csv(self, path: Path) -> None:
        write_text_file(path, self.to_csv())

    def monitors_csv(self) -> str:
        """One row per time step with its Newton count and monitored quantities."""

        names = sorted({name for t in self.per_timestep for name in t.monitors})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["timestep", "time", "newton_iters", *names])
        for t in self.per_timestep:
            writer.writerow(
                [t.timestep, repr(t.time), t.newton_iters]
                + [repr(float(t.monitors.get(name, float("nan")))) for name in names]
            )
        return buffer.getvalue()


def averages_from_csv(text: str) -> tuple[float, float]:
    """Recompute ``(avg GMRES per Newton step, avg Newton per time step)`` from the
    per-Newton-step CSV."""

    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"Unexpected header {reader.fieldnames}")
    gmres: dict[int, list[int]] = {}
    for row in reader:
        timestep = int(row["timestep"])
        gmres.setdefault(timestep, [])
        if int(row["newton_idx"]) > 0:
            gmres[timestep].append(int(row["gmres_iters"]))
    if not gmres:
        return 0.0, 0.0
    active = [sum(v) / len(v) for v in gmres.values() if v]
    avg_iter = sum(active) / len(active) if active else 0.0
    avg_newton = sum(len(v) for v in gmres.values()) / len(gmres)
    return avg_iter, avg_newton
