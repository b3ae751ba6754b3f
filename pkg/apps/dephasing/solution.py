"""
Exact dephasing solutions: rate and decoherence factor on one grid, with the
Gamma = int gamma cross-check.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy import integrate as sp_integrate

from apps.qdyn.exceptions import DomainError, GridError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.states import QubitState, StateLike, as_state
from apps.spectral.spectra import SpectralDensity, Temperature
from apps.dephasing.rates import decoherence_factor, rate_trajectory

logger = logging.getLogger(__name__)

CSV_HEADER = '# t in 1/omega_c, gamma in omega_c, Gamma dimensionless\nt,gamma,Gamma'
CSV_FORMAT = '%.12g'


@dataclass(frozen=True)
class QubitFrequency:
    """Bare qubit splitting; only rotates the coherence phase."""

    omega_0: float

    def __post_init__(self):
        if not math.isfinite(self.omega_0):
            raise DomainError(f'Qubit frequency must be finite, got {self.omega_0}')

    def rotate(self, state: StateLike, t: float) -> QubitState:
        """Free evolution exp(-i omega_0 sigma_z t / 2) applied to the state."""
        rho = np.array(as_state(state).rho)
        phase = np.exp(-1j * self.omega_0 * t)
        rho[0, 1] *= phase
        rho[1, 0] *= np.conj(phase)
        return QubitState(rho)


@dataclass(frozen=True)
class DephasingSolution:
    gamma_traj: Trajectory
    Gamma_traj: Trajectory
    # Spectral density the trajectories were computed from; None for closed forms.
    source: Optional[SpectralDensity]
    temperature: Temperature

    def __post_init__(self):
        if self.gamma_traj.kind is not SignalKind.RATE:
            raise GridError('gamma_traj must hold the dephasing rate')
        if self.Gamma_traj.kind is not SignalKind.GAMMA_CUMULATIVE:
            raise GridError('Gamma_traj must hold the decoherence factor')
        if len(self.gamma_traj.grid) != len(self.Gamma_traj.grid) or not np.allclose(
                self.gamma_traj.times, self.Gamma_traj.times):
            raise GridError('Rate and factor must share one time grid')
        if abs(self.Gamma_traj.values[0]) > 1e-12:
            raise DomainError(f'Gamma(0) must vanish, got {self.Gamma_traj.values[0]}')

    @property
    def grid(self) -> TimeGrid:
        return self.Gamma_traj.grid

    def consistency_error(self) -> float:
        """Max |Gamma(t) - int_0^t gamma| with the integral by the trapezoid rule."""
        integrated = sp_integrate.cumulative_trapezoid(
            np.real(self.gamma_traj.values), self.grid.points, initial=0.0
        )
        return float(np.max(np.abs(integrated - np.real(self.Gamma_traj.values))))

    def coherence(self) -> np.ndarray:
        """|rho_01(t)| / |rho_01(0)|."""
        return np.exp(-np.real(self.Gamma_traj.values))

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = np.column_stack([self.grid.points, self.gamma_traj.values, self.Gamma_traj.values])
        np.savetxt(path, data, delimiter=',', header=CSV_HEADER, comments='', fmt=CSV_FORMAT)
        return path


def solve_dephasing(spec: SpectralDensity, temperature: Temperature, grid: TimeGrid,
                    tol: float = None, max_workers: int = 1) -> DephasingSolution:
    """Rate and decoherence factor, each by its own quadrature."""
    gamma_traj = rate_trajectory(spec, temperature, grid, tol=tol, max_workers=max_workers)
    Gamma_traj = decoherence_factor(spec, temperature, grid, tol=tol, max_workers=max_workers)
    solution = DephasingSolution(gamma_traj, Gamma_traj, spec, temperature)
    logger.info(
        'Solved dephasing on %d points up to t=%g (consistency %.2e)',
        len(grid), grid.t_max, solution.consistency_error(),
    )
    return solution
