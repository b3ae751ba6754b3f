"""
Monte-Carlo wave function unraveling of the Lindblad master equation.

Each step of size dt either applies a jump A_k|phi>/|A_k phi| with
probability dp_k = gamma_k dt <phi|A_k^+ A_k|phi>, or evolves with the
non-Hermitian H_eff = H - (i/2) sum_k gamma_k A_k^+ A_k and renormalizes.
The mean projector over many trajectories follows the master equation.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from apps.mcwf.lindblad import OUTPUT_ATOL, STATE_COLUMNS, JumpChannel, hamiltonian_matrix, state_rows
from apps.qdyn import export
from apps.qdyn.exceptions import DomainError, InvalidStateError, StepSizeError
from apps.qdyn.grids import TimeGrid
from apps.qdyn.states import KET_ATOL, OperatorLike, QubitState

logger = logging.getLogger(__name__)

MAX_JUMP_PROBABILITY = 0.1


@dataclass(frozen=True)
class EnsembleConfig:
    n_traj: int = 1000
    dt: float = 0.01
    seed: int = 0
    max_workers: int = 1

    def __post_init__(self):
        if int(self.n_traj) != self.n_traj or self.n_traj < 1:
            raise DomainError(f'n_traj must be a positive integer, got {self.n_traj}')
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise DomainError(f'dt must be positive, got {self.dt}')
        if self.max_workers < 1:
            raise DomainError(f'max_workers must be >= 1, got {self.max_workers}')

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Kets at the grid points plus the jumps that happened in between."""

    states: np.ndarray
    jump_times: Tuple[float, ...] = ()
    jump_channels: Tuple[int, ...] = ()

    @property
    def n_jumps(self) -> int:
        return len(self.jump_times)


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    grid: TimeGrid
    states: List[QubitState]
    stderr00: np.ndarray
    stderr01: np.ndarray
    jumps: Tuple[Tuple[int, float], ...]
    n_traj: int

    def rows(self) -> np.ndarray:
        return np.column_stack([state_rows(self.grid.points, self.states), self.stderr00, self.stderr01])

    def first_jump_times(self) -> np.ndarray:
        first = {}
        for index, t in self.jumps:
            first.setdefault(index, t)
        return np.array(sorted(first.values()))

    def write_csv(self, path: Union[str, Path]) -> Path:
        return export.write_csv(path, STATE_COLUMNS + ('stderr00', 'stderr01'), self.rows())

    def write_jumps_csv(self, path: Union[str, Path]) -> Path:
        rows = np.array(self.jumps, dtype=float).reshape(-1, 2)
        return export.write_csv(path, ('traj', 'jump_time'), rows)


def _normalized_ket(phi0) -> np.ndarray:
    psi = np.asarray(phi0, dtype=complex).reshape(2)
    norm = np.linalg.norm(psi)
    if not math.isfinite(norm) or abs(norm - 1.0) > KET_ATOL:
        raise InvalidStateError(f'Initial state vector has norm {norm:.15g}, expected 1')
    return psi / norm


class _NoJumpPropagator:
    """exp(-i H_eff dt), cached for channels with constant rates."""

    def __init__(self, H: np.ndarray, channels: Sequence[JumpChannel]):
        self.H = H
        self.channels = channels
        self.constant = all(channel.is_constant for channel in channels)
        self._cache = {}

    def __call__(self, rates: np.ndarray, dt: float) -> np.ndarray:
        key = dt if self.constant else None
        if key is not None and key in self._cache:
            return self._cache[key]
        H_eff = self.H.astype(complex)
        for gamma, channel in zip(rates, self.channels):
            H_eff = H_eff - 0.5j * gamma * channel.decay
        propagator = linalg.expm(-1j * dt * H_eff)
        if key is not None:
            self._cache[key] = propagator
        return propagator


def mcwf_trajectory(H: Optional[OperatorLike], channels: Sequence[JumpChannel], phi0,
                    grid: TimeGrid, rng: np.random.Generator,
                    dt: Optional[float] = None) -> TrajectoryRecord:
    """
    One quantum-jump trajectory.

    Every grid interval is split into steps no longer than dt (one step per
    interval when dt is omitted). Rates are evaluated at step midpoints and
    jumps are recorded there.

    Raises:
        StepSizeError: when the jump probability of a step exceeds 0.1.
        DomainError: for a negative rate.
    """
    H = hamiltonian_matrix(H)
    channels = list(channels)
    propagator = _NoJumpPropagator(H, channels)
    psi = _normalized_ket(phi0)

    states = np.empty((len(grid), 2), dtype=complex)
    states[0] = psi
    jump_times, jump_channels = [], []
    for i, (start, stop) in enumerate(zip(grid.points[:-1], grid.points[1:])):
        n_steps = 1 if dt is None else max(1, int(math.ceil((stop - start) / dt - 1e-9)))
        h = (stop - start) / n_steps
        draws = rng.random(n_steps)
        for n in range(n_steps):
            midpoint = start + (n + 0.5) * h
            rates = np.array([channel.rate(midpoint) for channel in channels])
            dp = np.array([gamma * h * np.vdot(psi, c.decay @ psi).real for gamma, c in zip(rates, channels)])
            total = float(dp.sum()) if dp.size else 0.0
            if total > MAX_JUMP_PROBABILITY:
                raise StepSizeError(f'Jump probability {total:.3g} per step at t={midpoint:g}, reduce dt')
            if draws[n] < total:
                k = int(np.searchsorted(np.cumsum(dp), draws[n], side='right'))
                k = min(k, len(channels) - 1)
                psi = channels[k].A @ psi
                jump_times.append(float(midpoint))
                jump_channels.append(k)
            else:
                psi = propagator(rates, h) @ psi
            psi = psi / np.linalg.norm(psi)
        states[i + 1] = psi
    return TrajectoryRecord(states, tuple(jump_times), tuple(jump_channels))


def ensemble_average(config: EnsembleConfig, H: Optional[OperatorLike],
                     channels: Sequence[JumpChannel], phi0, grid: TimeGrid) -> EnsembleResult:
    """
    Mean projector over config.n_traj trajectories.

    Trajectory i draws from default_rng([seed, i]); results are reduced in
    index order so the output does not depend on config.max_workers.
    """
    def run(index: int) -> TrajectoryRecord:
        return mcwf_trajectory(H, channels, phi0, grid, config.rng(index), config.dt)

    rho_sum = np.zeros((len(grid), 2, 2), dtype=complex)
    pop_sum = np.zeros(len(grid))
    pop_sq_sum = np.zeros(len(grid))
    coh_sq_sum = np.zeros(len(grid))
    jumps = []

    def accumulate(index: int, record: TrajectoryRecord) -> None:
        nonlocal rho_sum, pop_sum, pop_sq_sum, coh_sq_sum
        psi = record.states
        rho_sum += np.einsum('ti,tj->tij', psi, psi.conj())
        population = np.abs(psi[:, 0]) ** 2
        pop_sum += population
        pop_sq_sum += population ** 2
        coh_sq_sum += np.abs(psi[:, 0] * psi[:, 1].conj()) ** 2
        jumps.extend((index, t) for t in record.jump_times)

    indices = range(config.n_traj)
    if config.max_workers > 1:
        with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            for index, record in zip(indices, executor.map(run, indices)):
                accumulate(index, record)
    else:
        for index in indices:
            accumulate(index, run(index))

    n = config.n_traj
    rho_mean = rho_sum / n
    if n > 1:
        variance = np.clip(pop_sq_sum - pop_sum ** 2 / n, 0.0, None) / (n - 1)
        stderr = np.sqrt(variance / n)
        # E|x|^2 - |E x|^2 for the complex coherence
        coh_variance = np.clip(coh_sq_sum - n * np.abs(rho_mean[:, 0, 1]) ** 2, 0.0, None) / (n - 1)
        stderr01 = np.sqrt(coh_variance / n)
    else:
        stderr = np.zeros(len(grid))
        stderr01 = np.zeros(len(grid))
    logger.info('MCWF ensemble: %d trajectories, %d jumps, seed=%d', n, len(jumps), config.seed)
    return EnsembleResult(
        grid=grid,
        states=[QubitState(rho, atol=OUTPUT_ATOL) for rho in rho_mean],
        stderr00=stderr,
        stderr01=stderr01,
        jumps=tuple(jumps),
        n_traj=n,
    )
