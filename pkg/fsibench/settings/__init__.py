"""
Base settings.

The default dictionary below is the single source of the benchmark configuration
schema: every section and key a config file may set, with the value used when the file
leaves it out. Physical defaults are typical values for blood in a large artery
and its wall (kinematic viscosity 0.0291 cm^2/s, reference pressure 10.66 kPa, and so
on) with a time step of 0.001 s.
"""
from __future__ import annotations

import copy
from functools import wraps
from pathlib import Path
from typing import TYPE_CHECKING, Any

from fsibench.utils.toml import create_toml, load_toml

if TYPE_CHECKING:
    from collections.abc import Callable

FSIBENCH_DIR: Path = Path(__file__).parents[1]

defaults: Path = FSIBENCH_DIR / "settings" / "defaults.toml"
log_file: Path = FSIBENCH_DIR / "settings" / "fsibench.log"

default_settings: dict[str, dict[str, Any]] = {
    "problem": {
        "kind": "fsi_channel",
        "nx": 16,
        "poisson_dirichlet": ["left", "right", "bottom", "top"],
        "ny_fluid": 4,
        "ny_solid": 2,
        "length": 1.0,
        "lumen_height": 0.15,
        "wall_thickness": 0.08,
        "n_steps": 20,
        "shape_derivative": "ale_convection",
        "synthetic_solid": 30,
        "synthetic_geometry": 30,
        "synthetic_velocity": 40,
        "synthetic_pressure": 12,
        "synthetic_interface": 8,
    },
    "physics": {
        "nu_f": 0.0291,
        "rho_f": 1.03e-3,
        "rho_s": 1.0e-3,
        "poisson": 0.49,
        "mu_s": 127.52,
        "E": 380.0,
        "p_ref": 10.66,
        "dt": 0.001,
    },
    "schedule": {
        "profile": "ramp_plateau",
        "ramp_time": 0.1,
        "plateau_time": 0.1,
        "pulse_time": 0.2,
        "pulse_peak": 1.5,
    },
    "solver": {
        "newton_tol": 1.0e-8,
        "max_newton": 15,
        "eta_loose": 1.0e-4,
        "eta_tight": 1.0e-8,
        "forcing_gamma": 0.9,
        "forcing_exponent": 2.0,
        "gmres_max_iter": 500,
        "gmres_restart": 0,
    },
    "precond": {
        "fluid_precond": ["monolithic"],
        "levels": 2,
        "overlap": 1,
        "N_subdomains": [4],
        "partitioner": "bfs",
        "coarse_velocity": "gdsw",
        "coarse_pressure": "rgdsw",
        "coarse_solid": "gdsw",
        "coarse_geometry": "gdsw",
        "coarse_scalar": "gdsw",
        "simple_alpha": 1.0,
    },
    "facsi": {
        "inner_fluid": "sweep",
        "inner_solid": "schwarz",
        "inner_geometry": "schwarz",
        "inner_krylov": False,
    },
    "sweep": {
        "flow_rates": [2.0],
        "seeds": [0],
    },
    "output": {
        "path": "bench_out",
        "format": "csv",
    },
}


def access_settings(func: Callable[..., Any]) -> Callable[..., Any]:
    """Decorator to access settings."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        """Attempt to read the settings file, and regenerate it if it is missing."""

        try:
            return func(*args, **kwargs)
        except FileNotFoundError:
            # Settings file does not exist
            create_toml(defaults, default_settings)
            return func(*args, **kwargs)

    return wrapper


@access_settings
def load_defaults() -> dict[str, dict[str, Any]]:
    """Get a fresh copy of the packaged default settings."""

    data: dict[str, dict[str, Any]] = load_toml(defaults)
    # Keys added to the schema after the file was written still get their default
    merged = copy.deepcopy(default_settings)
    for section, values in data.items():
        if section in merged:
            merged[section].update(values)
    return merged


def get_default(section: str, key: str) -> Any:
    """Get a single default value."""

    return load_defaults()[section][key]
