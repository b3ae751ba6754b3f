"""
The pure-dephasing channel: populations untouched, coherences scaled by
e^{-Gamma(t)}.
"""
import logging
from dataclasses import dataclass

import numpy as np

from apps.qdyn.exceptions import DomainError, GridError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.states import SIGMA_Z, QubitState, StateLike, as_state

logger = logging.getLogger(__name__)


def apply_dephasing(rho0: StateLike, Gamma_t: float) -> QubitState:
    """
    Return rho(t) with rho_01 and rho_10 multiplied by e^{-Gamma(t)}.

    Examples:
        >>> apply_dephasing(QubitState.plus(), 0.0).bloch
        (1.0, 0.0, 0.0)
    """
    if not np.isfinite(Gamma_t) or Gamma_t < 0.0:
        raise DomainError(f'Decoherence factor must be finite and >= 0, got {Gamma_t}')
    rho = np.array(as_state(rho0).rho)
    damping = np.exp(-Gamma_t)
    rho[0, 1] *= damping
    rho[1, 0] *= damping
    return QubitState(rho)


@dataclass(frozen=True)
class DephasingChannel:
    """Callable channel (state, t) -> state built from a sampled Gamma(t)."""

    Gamma_traj: Trajectory

    def __post_init__(self):
        if self.Gamma_traj.kind is not SignalKind.GAMMA_CUMULATIVE:
            raise GridError(f'Expected a Gamma trajectory, got {self.Gamma_traj.kind.value}')

    def __call__(self, state: StateLike, t: float) -> QubitState:
        return apply_dephasing(state, max(self.Gamma_traj.value_at(t), 0.0))


def master_equation_residual(solution, rho0: StateLike, grid: TimeGrid) -> float:
    """
    Largest spectral-norm mismatch between d(rho)/dt and the time-local generator.

    The derivative of the exact solution is taken with second-order finite
    differences on `grid` and compared with gamma(t)/2 [sigma_z rho sigma_z - rho].
    """
    Gamma_values = np.real(solution.Gamma_traj.values)
    rates = np.real(solution.gamma_traj.values)
    if len(grid) != Gamma_values.size or not np.allclose(grid.points, solution.Gamma_traj.times):
        raise GridError('Residual grid must match the solution grid')

    states = np.stack([apply_dephasing(rho0, max(g, 0.0)).rho for g in Gamma_values])
    derivative = np.gradient(states, grid.points, axis=0, edge_order=2)
    generator = 0.5 * rates[:, None, None] * (SIGMA_Z @ states @ SIGMA_Z - states)
    residual = np.linalg.norm(derivative - generator, ord=2, axis=(1, 2))
    return float(np.max(residual))
