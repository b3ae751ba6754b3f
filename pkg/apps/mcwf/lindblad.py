"""
Deterministic integration of the qubit master equation in Lindblad form

    d(rho)/dt = -i[H, rho] + sum_k gamma_k(t) (A_k rho A_k^+ - 1/2 {A_k^+ A_k, rho})
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from apps.qdyn import export
from apps.qdyn.exceptions import DomainError, InvalidOperatorError, InvalidStateError, StepSizeError
from apps.qdyn.grids import TimeGrid
from apps.qdyn.states import OperatorLike, QubitState, StateLike, as_hermitian, as_state

logger = logging.getLogger(__name__)

Rate = Union[float, Callable[[float], float]]

TRACE_DRIFT_MAX = 1e-6
OUTPUT_ATOL = 1e-9
STATE_COLUMNS = ('t', 'rho00', 'Re_rho01', 'Im_rho01', 'rho11')


@dataclass(frozen=True, eq=False)
class JumpChannel:
    """
    A decay channel (A, gamma): any 2x2 jump operator with a non-negative
    rate, constant or a function of time.
    """

    A: np.ndarray
    gamma: Rate
    label: str = ''
    decay: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        if A.shape != (2, 2) or not np.all(np.isfinite(A)):
            raise InvalidOperatorError('Jump operator must be a finite 2x2 matrix')
        A.setflags(write=False)
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'decay', A.conj().T @ A)
        if not callable(self.gamma):
            self.rate(0.0)

    @property
    def is_constant(self) -> bool:
        return not callable(self.gamma)

    def rate(self, t: float) -> float:
        value = float(self.gamma(t)) if callable(self.gamma) else float(self.gamma)
        if not math.isfinite(value) or value < 0.0:
            raise DomainError(f'Channel rate must be finite and >= 0, got {value} at t={t}')
        return value


def hamiltonian_matrix(H: Optional[OperatorLike]) -> np.ndarray:
    if H is None:
        return np.zeros((2, 2), dtype=complex)
    return np.asarray(as_hermitian(H).matrix)


def lindblad_rhs(H: Optional[OperatorLike], channels: Sequence[JumpChannel],
                 rho: np.ndarray, t: float = 0.0) -> np.ndarray:
    H = hamiltonian_matrix(H)
    drho = -1j * (H @ rho - rho @ H)
    for channel in channels:
        gamma = channel.rate(t)
        if gamma:
            A = channel.A
            drho += gamma * (A @ rho @ A.conj().T - 0.5 * (channel.decay @ rho + rho @ channel.decay))
    return drho


def lindblad_step(H: Optional[OperatorLike], channels: Sequence[JumpChannel],
                  rho: np.ndarray, t: float, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of size dt from time t."""
    k1 = lindblad_rhs(H, channels, rho, t)
    k2 = lindblad_rhs(H, channels, rho + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = lindblad_rhs(H, channels, rho + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = lindblad_rhs(H, channels, rho + dt * k3, t + dt)
    return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _output_state(rho: np.ndarray, t: float, dt: float) -> QubitState:
    try:
        return QubitState(rho, atol=OUTPUT_ATOL)
    except InvalidStateError as exc:
        raise StepSizeError(f'Unphysical state after t={t:g} with step {dt:g}: {exc}') from exc


def lindblad_integrate(H: Optional[OperatorLike], channels: Sequence[JumpChannel],
                       rho0: StateLike, grid: TimeGrid, substeps: int = 1) -> List[QubitState]:
    """
    Integrate the master equation on a uniform grid.

    Args:
        H: System Hamiltonian, or None.
        channels: Jump channels.
        rho0: Initial state.
        grid: Uniform output grid.
        substeps: Runge-Kutta steps per grid interval.

    Returns:
        One state per grid point.

    Raises:
        GridError: for a non-uniform grid.
        StepSizeError: when the trace drifts by more than 1e-6 or a state
            turns unphysical.
    """
    if int(substeps) < 1:
        raise DomainError(f'substeps must be >= 1, got {substeps}')
    H = hamiltonian_matrix(H)
    dt = grid.step / int(substeps)
    rho = np.array(as_state(rho0).rho)
    states = [QubitState(rho, atol=OUTPUT_ATOL)]
    for t in grid.points[:-1]:
        for n in range(int(substeps)):
            rho = lindblad_step(H, channels, rho, t + n * dt, dt)
        drift = abs(np.trace(rho) - 1.0)
        if drift > TRACE_DRIFT_MAX:
            raise StepSizeError(f'Trace drifted by {drift:.3e} at t={t:g}, reduce the step {dt:g}')
        states.append(_output_state(rho, t, dt))
    logger.debug('Integrated %d channels over %d steps of %g', len(channels), len(grid) - 1, dt)
    return states


def state_rows(times, states: Sequence[QubitState]) -> np.ndarray:
    return np.array([
        (t, s.rho[0, 0].real, s.rho[0, 1].real, s.rho[0, 1].imag, s.rho[1, 1].real)
        for t, s in zip(times, states)
    ])


def write_lindblad_csv(grid: TimeGrid, states: Sequence[QubitState], path: Union[str, Path]) -> Path:
    return export.write_csv(path, STATE_COLUMNS, state_rows(grid.points, states))
