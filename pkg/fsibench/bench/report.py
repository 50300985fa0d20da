"""
Benchmark reports: one row per sweep cell, written as CSV, as an aligned table with
one column group per preconditioner, or as gnuplot data blocks.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, field, fields
from typing import TYPE_CHECKING

from fsibench.utils.file import create_dir, write_text_file
from fsibench.utils.log import logger

if TYPE_CHECKING:
    from pathlib import Path

log = logger(__name__)

REPORT_HEADER: tuple[str, ...] = (
    "config",
    "N",
    "precond",
    "avg_iter",
    "avg_newton",
    "setup_s",
    "solve_s",
)
REPORT_FORMATS: tuple[str, ...] = ("csv", "table")


@dataclass(frozen=True)
class ReportRow:
    """Aggregates of one sweep cell.

    :param avg_iter: GMRES iterations per Newton step, averaged over time steps
    :param avg_newton: Newton steps per time step
    :param setup_s: total preconditioner setup seconds
    :param solve_s: total GMRES seconds
    """

    config: str
    N: int
    precond: str
    avg_iter: float
    avg_newton: float
    setup_s: float
    solve_s: float
    flow_rate: float = math.nan
    seed: int = 0
    problem_hash: str = ""
    status: str = "ok"
    message: str = ""

    @property
    def failed(self) -> bool:
        return self.status != "ok"


CELL_HEADER: tuple[str, ...] = tuple(f.name for f in fields(ReportRow))


@dataclass
class BenchReport:
    rows: list[ReportRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def add(self, row: ReportRow) -> None:
        self.rows.append(row)

    @property
    def failed_rows(self) -> list[ReportRow]:
        return [row for row in self.rows if row.failed]

    @property
    def preconds(self) -> list[str]:
        """Preconditioner labels in order of first appearance."""

        return list(dict.fromkeys(row.precond for row in self.rows))


def _cell(value: object) -> str:
    # repr keeps every digit of a float
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv(header: tuple[str, ...], rows: list[tuple[object, ...]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_cell(v) for v in row] for row in rows)
    return buffer.getvalue()


def emit_csv(report: BenchReport) -> str:
    """CSV with exactly the columns of :data:`REPORT_HEADER`."""

    width = len(REPORT_HEADER)
    return _csv(REPORT_HEADER, [astuple(row)[:width] for row in report.rows])


def emit_cells(report: BenchReport) -> str:
    """CSV with every field of the rows, including flow rate, seed, problem hash and
    failure status."""

    return _csv(CELL_HEADER, [astuple(row) for row in report.rows])


def emit_table(report: BenchReport) -> str:
    """Aligned table: one line per (config, N), one column group per preconditioner
    holding average iterations, setup and solve seconds."""

    groups = report.preconds
    keys = list(dict.fromkeys((row.config, row.N) for row in report.rows))
    lookup = {(row.config, row.N, row.precond): row for row in report.rows}

    def group_cells(row: ReportRow | None) -> list[str]:
        if row is None:
            return ["", "", ""]
        if row.failed:
            return ["failed", "-", "-"]
        return [f"{row.avg_iter:.1f}", f"{row.setup_s:.2f}", f"{row.solve_s:.2f}"]

    body = [
        [config, str(n)]
        + [c for name in groups for c in group_cells(lookup.get((config, n, name)))]
        for config, n in keys
    ]
    sub = ["config", "N"] + ["# avg. iter.", "setup", "solve"] * len(groups)
    widths = [max(len(line[i]) for line in [sub, *body]) for i in range(len(sub))]
    top = ["", ""]
    top_widths = widths[:2]
    for g, name in enumerate(groups):
        span = sum(widths[2 + 3 * g : 5 + 3 * g]) + 2 * 3
        top.append(name.center(span))
        top_widths.append(span)

    def join(cells: list[str], sizes: list[int]) -> str:
        return " | ".join(c.rjust(w) for c, w in zip(cells, sizes)).rstrip()

    lines = [join(top, top_widths), join(sub, widths)]
    lines.append("-" * len(lines[1]))
    lines += [join(line, widths) for line in body]
    return "\n".join(lines) + "\n"


def emit_gnuplot(report: BenchReport) -> str:
    """One data block per preconditioner, blocks separated by two blank lines so
    gnuplot can select them with ``index``."""

    blocks = []
    for name in report.preconds:
        lines = [f"# {name}", "# N avg_iter avg_newton setup_s solve_s flow_rate"]
        lines += [
            " ".join(
                _cell(v)
                for v in (
                    row.N,
                    row.avg_iter,
                    row.avg_newton,
                    row.setup_s,
                    row.solve_s,
                    row.flow_rate,
                )
            )
            for row in report.rows
            if row.precond == name
        ]
        blocks.append("\n".join(lines))
    return "\n\n\n".join(blocks) + "\n"


def emit_report(report: BenchReport, fmt: str = "csv") -> str:
    """Render a report.

    :param fmt: ``csv`` or ``table``
    :raises ValueError: for an empty report or an unknown format
    """

    if not report.rows:
        raise ValueError("Cannot emit an empty report")
    if fmt == "csv":
        return emit_csv(report)
    if fmt == "table":
        return emit_table(report)
    raise ValueError(f"Unknown report format {fmt!r}, expected one of {REPORT_FORMATS}")


def write_report(report: BenchReport, directory: Path, fmt: str = "csv") -> Path:
    """Write ``report.csv`` (or ``report.txt``), ``cells.csv`` and ``report.dat``.

    :return: path of the main report file
    :raises OSError: if the directory is not writable
    """

    create_dir(directory)
    path = directory / ("report.csv" if fmt == "csv" else "report.txt")
    write_text_file(path, emit_report(report, fmt))
    write_text_file(directory / "cells.csv", emit_cells(report))
    write_text_file(directory / "report.dat", emit_gnuplot(report))
    log.debug("Wrote %d report rows to %s", len(report), directory)
    return path


def parse_report_csv(text: str) -> BenchReport:
    """Read a report or cells CSV back, numbers exactly as written.

    :raises ValueError: on an unexpected header
    """

    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader, ()))
    if header not in (REPORT_HEADER, CELL_HEADER):
        raise ValueError(f"Unexpected report header {header}")
    report = BenchReport()
    for values in reader:
        if not values:
            continue
        record = dict(zip(header, values))
        report.add(
            ReportRow(
                config=record["config"],
                N=int(record["N"]),
                precond=record["precond"],
                avg_iter=float(record["avg_iter"]),
                avg_newton=float(record["avg_newton"]),
                setup_s=float(record["setup_s"]),
                solve_s=float(record["solve_s"]),
                flow_rate=float(record.get("flow_rate", "nan")),
                seed=int(record.get("seed", "0")),
                problem_hash=record.get("problem_hash", ""),
                status=record.get("status", "ok"),
                message=record.get("message", ""),
            )
        )
    return report
