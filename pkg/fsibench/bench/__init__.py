"""
Import the benchmark harness.
"""
from .config import (
    FLUID_PRECONDS,
    OUTPUT_FORMATS,
    PROBLEMS,
    BenchConfig,
    build_config,
    parse_config,
    parse_config_text,
)
from .exceptions import (
    EXIT_ACCEPTANCE,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_SOLVER,
    AcceptanceFailure,
    ConfigError,
    SweepFailure,
    exit_code,
)
from .problems import (
    BENCH_PROBLEMS,
    BenchProblem,
    FluidChannelProblem,
    FsiChannelProblem,
    LinearProblem,
    fluid_preconditioner,
    make_problem,
    mean_outlet_pressure,
    mid_channel_wall_dof,
)
from .report import (
    CELL_HEADER,
    REPORT_HEADER,
    BenchReport,
    ReportRow,
    emit_cells,
    emit_gnuplot,
    emit_report,
    parse_report_csv,
    write_report,
)
from .sweep import cell_id, run_sweep
from .verify import CHECKS, SLOW_CHECKS, format_results, require_passed, run_checks

__all__ = [
    "FLUID_PRECONDS",
    "OUTPUT_FORMATS",
    "PROBLEMS",
    "BenchConfig",
    "build_config",
    "parse_config",
    "parse_config_text",
    "EXIT_ACCEPTANCE",
    "EXIT_CONFIG",
    "EXIT_OK",
    "EXIT_SOLVER",
    "AcceptanceFailure",
    "ConfigError",
    "SweepFailure",
    "exit_code",
    "BENCH_PROBLEMS",
    "BenchProblem",
    "FluidChannelProblem",
    "FsiChannelProblem",
    "LinearProblem",
    "fluid_preconditioner",
    "make_problem",
    "mean_outlet_pressure",
    "mid_channel_wall_dof",
    "CELL_HEADER",
    "REPORT_HEADER",
    "BenchReport",
    "ReportRow",
    "emit_cells",
    "emit_gnuplot",
    "emit_report",
    "parse_report_csv",
    "write_report",
    "cell_id",
    "run_sweep",
    "CHECKS",
    "SLOW_CHECKS",
    "format_results",
    "require_passed",
    "run_checks",
]
