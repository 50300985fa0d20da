"""
Physical parameters of the fluid and the wall.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

from fsibench.utils.units import to_internal_stress


@dataclass(frozen=True)
class PhysicalParams:
    """Material and time-step parameters.

    Stresses are given in kPa and converted on access to the internal unit
    kg / (cm s^2); lengths are cm, densities kg / cm^3, time s.
    """

    nu_f: float = 0.0291
    rho_f: float = 1.03e-3
    rho_s: float = 1.0e-3
    poisson: float = 0.49
    mu_s: float = 127.52
    E: float = 380.0
    p_ref: float = 10.66
    dt: float = 0.001
    flow_rate: float = 0.0

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if name == "flow_rate":
                if value < 0.0:
                    raise ValueError(f"flow_rate must be nonnegative, got {value}")
            elif not value > 0.0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if not self.poisson < 0.5:
            raise ValueError(f"poisson must be below 0.5, got {self.poisson}")

    @classmethod
    def from_settings(
        cls, physics: dict[str, Any], flow_rate: float = 0.0
    ) -> PhysicalParams:
        """Build from a ``[physics]`` settings section."""

        return cls(**{**physics, "flow_rate": flow_rate})

    @property
    def mu_f(self) -> float:
        """Dynamic viscosity."""

        return self.rho_f * self.nu_f

    @property
    def youngs_modulus(self) -> float:
        return to_internal_stress(self.E, "kPa")

    @property
    def reference_pressure(self) -> float:
        return to_internal_stress(self.p_ref, "kPa")

    @property
    def lame(self) -> tuple[float, float]:
        """Plane strain Lame parameters (lambda, mu) in internal units."""

        E, nu = self.youngs_modulus, self.poisson
        return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))
