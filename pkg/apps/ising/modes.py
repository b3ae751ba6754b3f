"""
Transverse-field Ising chain probed by a central qubit, solved through its
free-fermion modes.

    H(lam) = -J sum_j sigma^z_j sigma^z_{j+1} - J lam sum_j sigma^x_j

with periodic boundaries. The qubit shifts the field of the chain to
lam* = lam + delta when excited, so the echo compares the ground state of
H(lam) with its evolution under H(lam*). In the even-parity sector the
chain splits into independent two-level problems, one per momentum pair
(k, -k) with k = (2m+1) pi / N.
"""
import enum
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from apps.qdyn import export
from apps.qdyn.exceptions import DomainError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.states import SIGMA_X, SIGMA_Z, HermitianOp2, expm_2x2

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Largest quasiparticle group velocity in units of J
MAX_GROUP_VELOCITY = 2.0


class Boundary(str, enum.Enum):
    PERIODIC = 'periodic'
    OPEN = 'open'


@dataclass(frozen=True)
class IsingParams:
    N: int
    lam: float
    delta: float
    J: float = 1.0
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, 'boundary', Boundary(self.boundary))
        if int(self.N) != self.N or self.N < 4 or self.N % 2:
            raise DomainError(f'Chain length must be an even integer >= 4, got {self.N}')
        if not (math.isfinite(self.J) and self.J > 0.0):
            raise DomainError(f'Coupling J must be positive, got {self.J}')
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise DomainError(f'Transverse field must be non-negative, got {self.lam}')
        if not math.isfinite(self.delta):
            raise DomainError(f'Probe coupling must be finite, got {self.delta}')

    @property
    def lam_star(self) -> float:
        return self.lam + self.delta

    @classmethod
    def at_field(cls, N: int, lam_star: float, delta: float, **kwargs) -> 'IsingParams':
        """Parameters for a given renormalized field lam* = lam + delta."""
        return cls(N=N, lam=lam_star - delta, delta=delta, **kwargs)


def mode_hamiltonian(k: float, lam: float, J: float = 1.0) -> HermitianOp2:
    """h_k(lam) = 2J [(lam - cos k) sigma^z + sin k sigma^x]."""
    return HermitianOp2(2.0 * J * ((lam - math.cos(k)) * SIGMA_Z + math.sin(k) * SIGMA_X))


def mode_ground_state(k: float, lam: float) -> np.ndarray:
    """Closed-form ground state (sin(phi/2), -cos(phi/2)) of h_k(lam)."""
    phi = math.atan2(math.sin(k), lam - math.cos(k))
    return np.array([math.sin(0.5 * phi), -math.cos(0.5 * phi)], dtype=complex)


def quasienergy(k: ArrayLike, lam: float, J: float = 1.0) -> np.ndarray:
    """Positive eigenvalue 2J sqrt(1 + lam^2 - 2 lam cos k) of h_k."""
    return 2.0 * J * np.sqrt(1.0 + lam * lam - 2.0 * lam * np.cos(k))


@dataclass(frozen=True, eq=False)
class ModeSet:
    momenta: np.ndarray
    ground: Tuple[HermitianOp2, ...]
    excited: Tuple[HermitianOp2, ...]
    ground_states: np.ndarray


def build_modes(params: IsingParams) -> ModeSet:
    """
    Momentum modes of the even-parity sector.

    Raises:
        DomainError: for open boundaries, which break momentum conservation.
    """
    if params.boundary is not Boundary.PERIODIC:
        raise DomainError('The mode decomposition needs periodic boundaries, use ed_oracle')
    momenta = (2.0 * np.arange(params.N // 2) + 1.0) * math.pi / params.N
    return ModeSet(
        momenta=momenta,
        ground=tuple(mode_hamiltonian(k, params.lam, params.J) for k in momenta),
        excited=tuple(mode_hamiltonian(k, params.lam_star, params.J) for k in momenta),
        ground_states=np.array([mode_ground_state(k, params.lam) for k in momenta]),
    )


def echo_at(modes: ModeSet, times) -> np.ndarray:
    """
    L(t) = prod_k |<g_k| exp(-i h_k(lam*) t) |g_k>|^2 at arbitrary real times.

    The product runs over the modes in increasing k.
    """
    times = np.asarray(times, dtype=float)
    echo = np.ones(times.shape)
    for state, hamiltonian in zip(modes.ground_states, modes.excited):
        propagator = expm_2x2(hamiltonian, times)
        amplitude = np.einsum('i,...ij,j->...', state.conj(), propagator, state)
        echo *= np.abs(amplitude) ** 2
    return echo


def loschmidt_echo(params: IsingParams, grid: TimeGrid) -> Trajectory:
    """Loschmidt echo of the chain on a time grid (times in 1/J)."""
    echo = echo_at(build_modes(params), grid.points)
    return Trajectory(grid, np.clip(echo, 0.0, 1.0), SignalKind.ECHO, label=f'N={params.N}')


def recurrence_time(N: int, J: float = 1.0) -> float:
    """Time for the fastest quasiparticles to cross half the ring, N / (2 v_max)."""
    return N / (2.0 * MAX_GROUP_VELOCITY * J)


def coupling_time(delta: float, J: float = 1.0) -> float:
    """
    Quarter period pi / (4 J |delta|) of the critical mode at k = |delta|.

    Modes with k below the coupling are driven out of linear response and
    refill the echo after this time even at the critical field.
    """
    return math.inf if delta == 0.0 else math.pi / (4.0 * J * abs(delta))


def default_t_cut(N: int, delta: float = 0.0, J: float = 1.0) -> float:
    """Earlier of the recurrence estimate and the coupling time."""
    return min(recurrence_time(N, J), coupling_time(delta, J))


def write_echo_csv(traj: Trajectory, path: Union[str, Path]) -> Path:
    return export.write_csv(path, ('t', 'L'), np.column_stack([traj.times, traj.values]))
