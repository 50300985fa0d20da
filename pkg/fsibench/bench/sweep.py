"""
Run the Cartesian product of flow rates, subdomain counts and preconditioners.
"""
from __future__ import annotations

import math
import time
from typing import TYPE_CHECKING

from fsibench.runners import CellRunner
from fsibench.utils.file import create_dir, write_text_file
from fsibench.utils.log import logger

from .problems import BenchProblem, make_problem
from .report import BenchReport, ReportRow, write_report

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from .config import BenchConfig

log = logger(__name__)


def cell_id(cfg: BenchConfig, flow_rate: float, seed: int) -> str:
    """Config id of a report row."""

    return f"{cfg.name}/q={flow_rate!r}/seed={seed}"


def _failed_row(
    config: str, n: int, precond: str, flow_rate: float, seed: int, message: str
) -> ReportRow:
    return ReportRow(
        config=config,
        N=n,
        precond=precond,
        avg_iter=math.nan,
        avg_newton=math.nan,
        setup_s=math.nan,
        solve_s=math.nan,
        flow_rate=flow_rate,
        seed=seed,
        status="failed",
        message=message,
    )


def run_sweep(
    cfg: BenchConfig,
    out_dir: Path | None = None,
    on_cell: Callable[[ReportRow], None] | None = None,
) -> BenchReport:
    """Run every cell in order: flow rate, then subdomain count, then
    preconditioner, then seed.

    A cell whose solve raises becomes a failed row and the sweep continues. With
    ``out_dir`` the report is rewritten after every cell and each cell's per-step
    statistics go to ``out_dir/cells``.
    """

    report = BenchReport()
    problems: dict[tuple[float, int], BenchProblem | str] = {}
    start = time.perf_counter()
    if out_dir is not None:
        create_dir(out_dir / "cells")

    for rate in cfg.flow_rates:
        for n in cfg.n_subdomains:
            for precond in _variants(cfg, problems, rate):
                for seed in cfg.seeds:
                    row = _run_cell(cfg, problems, rate, n, precond, seed, out_dir)
                    report.add(row)
                    if on_cell is not None:
                        on_cell(row)
                    if out_dir is not None:
                        write_report(report, out_dir, cfg.output_format)

    log.info(
        "Sweep %s: %d cells (%d failed) in %.2f s",
        cfg.name,
        len(report),
        len(report.failed_rows),
        time.perf_counter() - start,
    )
    return report


def _problem(
    cfg: BenchConfig,
    problems: dict[tuple[float, int], BenchProblem | str],
    rate: float,
    seed: int,
) -> BenchProblem | str:
    """The cached problem of a (rate, seed) pair, or the message of its failure."""

    key = (rate, seed)
    if key not in problems:
        runner = CellRunner(
            f"setup {cell_id(cfg, rate, seed)}", lambda: make_problem(cfg, rate, seed)
        )
        runner.run()
        problems[key] = runner.message if runner.failed else runner.result_value
    return problems[key]


def _variants(
    cfg: BenchConfig,
    problems: dict[tuple[float, int], BenchProblem | str],
    rate: float,
) -> list[str]:
    for seed in cfg.seeds:
        problem = _problem(cfg, problems, rate, seed)
        if isinstance(problem, BenchProblem):
            return problem.variants()
    return list(dict.fromkeys(cfg.fluid_preconds))


def _run_cell(
    cfg: BenchConfig,
    problems: dict[tuple[float, int], BenchProblem | str],
    rate: float,
    n: int,
    precond: str,
    seed: int,
    out_dir: Path | None,
) -> ReportRow:
    config = cell_id(cfg, rate, seed)
    problem = _problem(cfg, problems, rate, seed)
    if isinstance(problem, str):
        return _failed_row(config, n, precond, rate, seed, problem)

    log.info("Cell %s N=%d %s", config, n, precond)
    runner = CellRunner(f"{config} N={n} {precond}", lambda: problem.solve(precond, n))
    runner.run()
    if runner.failed or runner.stats is None:
        return _failed_row(config, n, precond, rate, seed, runner.message)

    stats = runner.stats
    if out_dir is not None:
        stem = f"{cfg.name}_q{rate!r}_s{seed}_N{n}_{precond}"
        stats.write_csv(out_dir / "cells" / f"{stem}.csv")
        write_text_file(
            out_dir / "cells" / f"{stem}_monitors.csv", stats.monitors_csv()
        )
    if stats.gmres_failures:
        log.warning(
            "Cell %s N=%d %s: %d GMRES solves did not converge",
            config,
            n,
            precond,
            stats.gmres_failures,
        )
    return ReportRow(
        config=config,
        N=n,
        precond=precond,
        avg_iter=stats.avg_gmres_per_newton,
        avg_newton=stats.avg_newton,
        setup_s=stats.setup_s,
        solve_s=stats.solve_s,
        flow_rate=rate,
        seed=seed,
        problem_hash=problem.problem_hash(),
    )
