"""
Time grids and sampled signals.

Times are in the natural unit of the study: 1/omega_c for dephasing,
hbar/E_ref for BEC reservoirs and 1/J for the Ising chain.
"""
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from apps.qdyn.exceptions import GridError


class SignalKind(str, enum.Enum):
    GAMMA_CUMULATIVE = 'Gamma'
    RATE = 'gamma'
    DISTINGUISHABILITY = 'D'
    ECHO = 'L'
    POPULATION = 'population'


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing sample times starting at 0."""

    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1)
        if points.size < 2:
            raise GridError('A time grid needs at least two points')
        if not np.all(np.isfinite(points)):
            raise GridError('Time grid has non-finite points')
        if points[0] != 0.0:
            raise GridError(f'Time grid must start at 0, starts at {points[0]}')
        if np.any(np.diff(points) <= 0.0):
            raise GridError('Time grid must be strictly increasing')
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    @classmethod
    def uniform(cls, t_max: float, n: int) -> 'TimeGrid':
        """n equally spaced points on [0, t_max]."""
        if t_max <= 0.0:
            raise GridError(f't_max must be positive, got {t_max}')
        return cls(np.linspace(0.0, t_max, int(n)))

    @classmethod
    def with_step(cls, t_max: float, dt: float) -> 'TimeGrid':
        if dt <= 0.0 or t_max <= 0.0:
            raise GridError('t_max and dt must be positive')
        steps = int(round(t_max / dt))
        return cls(np.arange(steps + 1) * dt)

    def __len__(self) -> int:
        return int(self.points.size)

    @property
    def t_max(self) -> float:
        return float(self.points[-1])

    @property
    def is_uniform(self) -> bool:
        steps = np.diff(self.points)
        return bool(np.allclose(steps, steps[0], rtol=1e-9, atol=0.0))

    @property
    def step(self) -> float:
        if not self.is_uniform:
            raise GridError('Time grid is not uniform')
        return float(self.points[1] - self.points[0])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A time grid with one sampled scalar signal."""

    grid: TimeGrid
    values: np.ndarray
    kind: SignalKind
    label: Optional[str] = None

    def __post_init__(self):
        values = np.array(self.values)
        if values.ndim != 1 or values.size != len(self.grid):
            raise GridError(
                f'Trajectory has {values.size} values for a grid of {len(self.grid)} points'
            )
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'kind', SignalKind(self.kind))

    @property
    def times(self) -> np.ndarray:
        return self.grid.points

    def value_at(self, t: float) -> float:
        """Linear interpolation inside the grid."""
        if t < 0.0 or t > self.grid.t_max:
            raise GridError(f'Time {t} lies outside [0, {self.grid.t_max}]')
        return float(np.interp(t, self.times, np.real(self.values)))
