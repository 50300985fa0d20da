"""
Scalar model problems that exercise the time loop with known solutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from .integrators import BdfHistory, NewmarkScheme, NewmarkState, energy

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from .gmres import Operator


@dataclass
class DecayProblem:
    """``y' = -rate y`` with ``y(0) = y0`` under BDF time stepping."""

    dt: float
    rate: float = 1.0
    y0: float = 1.0
    history: BdfHistory = field(default_factory=BdfHistory)
    time: float = 0.0

    def exact(self, t: float) -> float:
        return self.y0 * math.exp(-self.rate * t)

    def initial_state(self) -> NDArray[np.float64]:
        self.history = BdfHistory()
        self.history.push(np.array([self.y0]))
        return np.array([self.y0])

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        self.time = time

    def residual(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        derivative = (self.history.alpha0 * x - self.history.combination()) / self.dt
        residual: NDArray[np.float64] = derivative + self.rate * x
        return residual

    def jacobian(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array([[self.history.alpha0 / self.dt + self.rate]])

    def preconditioner(self, J: Any, x: NDArray[np.float64]) -> Operator | None:
        return None

    def end_step(self, x: NDArray[np.float64]) -> dict[str, float]:
        self.history.push(x)
        value = float(x[0])
        return {"y": value, "error": abs(value - self.exact(self.time))}


@dataclass
class OscillatorProblem:
    """Undamped ``m d'' + k d = 0`` under Newmark time stepping."""

    dt: float
    mass: float = 1.0
    stiffness: float = (2.0 * math.pi) ** 2
    d0: float = 1.0
    beta: float = 0.25
    gamma: float = 0.5
    state: NewmarkState = field(default_factory=lambda: NewmarkState.at_rest(1))
    predictor: NDArray[np.float64] = field(default_factory=lambda: np.zeros(1))

    @property
    def scheme(self) -> NewmarkScheme:
        return NewmarkScheme(self.dt, self.beta, self.gamma)

    def energy(self, state: NewmarkState | None = None) -> float:
        s = self.state if state is None else state
        m = np.array([[self.mass]])
        k = np.array([[self.stiffness]])
        return energy(m, k, s.d, s.v)

    def initial_state(self) -> NDArray[np.float64]:
        d = np.array([self.d0])
        a = -self.stiffness * d / self.mass
        self.state = NewmarkState(d, np.zeros(1), a)
        return d.copy()

    def begin_step(self, step: int, time: float, flow_rate: float) -> None:
        self.predictor = self.scheme.predictor(self.state.d, self.state.v, self.state.a)

    def residual(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        a_new = self.scheme.acceleration(x, self.predictor)
        residual: NDArray[np.float64] = self.mass * a_new + self.stiffness * x
        return residual

    def jacobian(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array([[self.mass / (self.beta * self.dt**2) + self.stiffness]])

    def preconditioner(self, J: Any, x: NDArray[np.float64]) -> Operator | None:
        return None

    def end_step(self, x: NDArray[np.float64]) -> dict[str, float]:
        self.state = self.state.advance(self.scheme, x)
        return {"energy": self.energy(), "displacement": float(x[0])}
