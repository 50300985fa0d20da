"""
BDF time stepping for the fluid and Newmark time stepping for the solid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from fsibench.linalg import SparseMatrix

BDF_COEFFICIENTS: dict[int, tuple[float, tuple[float, ...]]] = {
    1: (1.0, (1.0,)),
    2: (1.5, (2.0, -0.5)),
}


def bdf_coefficients(order: int) -> tuple[float, tuple[float, ...]]:
    """``(alpha0, c)`` with ``dx/dt ~ (alpha0 x_n - sum_i c_i x_{n-1-i}) / dt``."""

    if order not in BDF_COEFFICIENTS:
        raise ValueError(f"BDF order must be 1 or 2, got {order}")
    return BDF_COEFFICIENTS[order]


@dataclass
class BdfHistory:
    """Previous states, most recent first. The order grows to ``max_order`` as
    states accumulate, so the first step is BDF-1."""

    states: list[NDArray[np.float64]] = field(default_factory=list)
    max_order: int = 2

    @property
    def order(self) -> int:
        if not self.states:
            raise ValueError("BDF history needs an initial state")
        return min(len(self.states), self.max_order)

    @property
    def alpha0(self) -> float:
        return bdf_coefficients(self.order)[0]

    def combination(self) -> NDArray[np.float64]:
        """``sum_i c_i x_{n-1-i}``."""

        _, coefficients = bdf_coefficients(self.order)
        total = np.zeros_like(self.states[0])
        for c, state in zip(coefficients, self.states):
            total = total + c * state
        return total

    def push(self, state: ArrayLike) -> None:
        self.states.insert(0, np.array(state, dtype=float))
        del self.states[self.max_order :]


@dataclass(frozen=True)
class NewmarkScheme:
    """Newmark update; ``beta = 1/4``, ``gamma = 1/2`` is the energy-conserving
    average acceleration rule."""

    dt: float
    beta: float = 0.25
    gamma: float = 0.5

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ValueError(f"Time step must be positive, got {self.dt}")
        if not 0.0 < self.beta <= 0.5 or not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"Invalid Newmark parameters {(self.beta, self.gamma)}")

    def predictor(
        self, d: NDArray[np.float64], v: NDArray[np.float64], a: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        return d + self.dt * v + self.dt**2 * (0.5 - self.beta) * a

    def acceleration(
        self, d_new: NDArray[np.float64], predictor: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        return (d_new - predictor) / (self.beta * self.dt**2)

    def velocity(
        self, v: NDArray[np.float64], a: NDArray[np.float64], a_new: NDArray[np.float64]
    ) -> NDArray[np.float64]:
        return v + self.dt * ((1.0 - self.gamma) * a + self.gamma * a_new)

    def explicit_velocity(
        self,
        v: NDArray[np.float64],
        a: NDArray[np.float64],
        predictor: NDArray[np.float64],
    ) -> NDArray[np.float64]:
        """Part of the new velocity not depending on the new displacement.

        The new velocity is this plus ``gamma / (beta dt) d_new``.
        """

        return (
            v
            + self.dt * (1.0 - self.gamma) * a
            - self.gamma / (self.beta * self.dt) * predictor
        )

    @property
    def velocity_factor(self) -> float:
        return self.gamma / (self.beta * self.dt)


@dataclass
class NewmarkState:
    d: NDArray[np.float64]
    v: NDArray[np.float64]
    a: NDArray[np.float64]

    @classmethod
    def at_rest(cls, n: int) -> NewmarkState:
        return cls(np.zeros(n), np.zeros(n), np.zeros(n))

    def advance(
        self, scheme: NewmarkScheme, d_new: NDArray[np.float64]
    ) -> NewmarkState:
        """State after the step that solved for ``d_new``."""

        predictor = scheme.predictor(self.d, self.v, self.a)
        a_new = scheme.acceleration(d_new, predictor)
        return NewmarkState(
            np.array(d_new, dtype=float), scheme.velocity(self.v, self.a, a_new), a_new
        )


def energy(
    M: SparseMatrix | NDArray[np.float64],
    K: SparseMatrix | NDArray[np.float64],
    d: NDArray[np.float64],
    v: NDArray[np.float64],
) -> float:
    """Kinetic plus strain energy ``(v M v + d K d) / 2``."""

    return 0.5 * float(v @ (M @ v)) + 0.5 * float(d @ (K @ d))
