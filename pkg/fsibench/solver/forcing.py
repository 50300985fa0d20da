"""
Adaptive forcing terms for inexact Newton.
"""
from __future__ import annotations

from dataclasses import dataclass

from .exceptions import ForcingError

# Above this value the previous forcing term bounds the next one from below
SAFEGUARD_THRESHOLD: float = 0.1


@dataclass(frozen=True)
class ForcingConfig:
    """Bounds and parameters of the Eisenstat-Walker forcing term.

    :param eta_loose: loosest (largest) relative GMRES tolerance, used at ``k = 0``
    :param eta_tight: tightest (smallest) relative GMRES tolerance
    """

    eta_loose: float = 1e-4
    eta_tight: float = 1e-8
    gamma: float = 0.9
    exponent: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 < self.eta_tight < self.eta_loose < 1.0:
            raise ValueError(
                f"Need 0 < eta_tight < eta_loose < 1, got {self.eta_tight} and "
                f"{self.eta_loose}"
            )
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"Forcing gamma must lie in (0, 1], got {self.gamma}")
        if not 1.0 < self.exponent <= 2.0:
            raise ValueError(
                f"Forcing exponent must lie in (1, 2], got {self.exponent}"
            )


def forcing_term(
    prev_residual: float,
    curr_residual: float,
    cfg: ForcingConfig,
    k: int,
    eta_prev: float | None = None,
) -> float:
    """Relative GMRES tolerance of Newton step ``k``.

    ``eta = gamma (curr / prev) ** exponent``, raised to ``gamma eta_prev ** exponent``
    when that exceeds 0.1, then clamped to ``[eta_tight, eta_loose]``.

    :raises ForcingError: for nonpositive residual norms or a negative step index
    """

    if k < 0:
        raise ForcingError(f"Newton index must be nonnegative, got {k}")
    if prev_residual <= 0.0 or curr_residual <= 0.0:
        raise ForcingError(
            f"Residual norms must be positive, got {prev_residual} and {curr_residual}"
        )
    if k == 0:
        return cfg.eta_loose
    eta = cfg.gamma * (curr_residual / prev_residual) ** cfg.exponent
    if eta_prev is not None:
        safeguard = cfg.gamma * eta_prev**cfg.exponent
        if safeguard > SAFEGUARD_THRESHOLD:
            eta = max(eta, safeguard)
    return min(max(eta, cfg.eta_tight), cfg.eta_loose)
