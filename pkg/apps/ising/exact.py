"""
Exact diagonalization of small chains, used to certify the mode solution.
"""
import logging
from functools import reduce

import numpy as np
from scipy import linalg

from apps.ising.modes import Boundary, IsingParams
from apps.qdyn.exceptions import SizeError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.states import IDENTITY, SIGMA_X, SIGMA_Z

logger = logging.getLogger(__name__)

MAX_SITES = 10


def _site_operator(op: np.ndarray, site: int, N: int) -> np.ndarray:
    factors = [IDENTITY] * N
    factors[site] = op
    return reduce(np.kron, factors)


def chain_hamiltonian(N: int, lam: float, J: float = 1.0,
                      boundary: Boundary = Boundary.PERIODIC) -> np.ndarray:
    """Dense -J sum sigma^z sigma^z - J lam sum sigma^x on 2^N states."""
    if N > MAX_SITES:
        raise SizeError(f'Dense diagonalization is limited to {MAX_SITES} sites, got {N}')
    z_ops = [_site_operator(SIGMA_Z, j, N) for j in range(N)]
    bonds = N if Boundary(boundary) is Boundary.PERIODIC else N - 1
    H = np.zeros((2 ** N, 2 ** N), dtype=complex)
    for j in range(bonds):
        H -= J * z_ops[j] @ z_ops[(j + 1) % N]
    for j in range(N):
        H -= J * lam * _site_operator(SIGMA_X, j, N)
    return H


def ed_oracle(params: IsingParams, grid: TimeGrid) -> Trajectory:
    """
    Loschmidt echo by brute force.

    L(t) = |sum_n |<n|Phi>|^2 exp(-i E_n t)|^2 with (E_n, |n>) the spectrum of
    the excited-branch chain and |Phi> the ground state of the bare chain.

    Raises:
        SizeError: for more than 10 sites.
    """
    if params.N > MAX_SITES:
        raise SizeError(f'Dense diagonalization is limited to {MAX_SITES} sites, got {params.N}')
    _, vectors = linalg.eigh(chain_hamiltonian(params.N, params.lam, params.J, params.boundary))
    ground = vectors[:, 0]
    energies, modes = linalg.eigh(chain_hamiltonian(params.N, params.lam_star, params.J, params.boundary))
    weights = np.abs(modes.conj().T @ ground) ** 2
    amplitude = np.exp(-1j * np.outer(grid.points, energies)) @ weights
    logger.debug('ED echo for N=%d lam=%g delta=%g', params.N, params.lam, params.delta)
    return Trajectory(grid, np.clip(np.abs(amplitude) ** 2, 0.0, 1.0), SignalKind.ECHO, label='ed')
