"""
Tests comparing the mode solution with exact diagonalization.
"""
import itertools

import numpy as np
import pytest
from scipy import linalg

from apps.ising.exact import chain_hamiltonian, ed_oracle
from apps.ising.modes import Boundary, IsingParams, loschmidt_echo
from apps.qdyn.exceptions import SizeError
from apps.qdyn.grids import TimeGrid

ORACLE_CASES = list(itertools.product([6, 8, 10], [0.5, 0.9, 1.0, 1.5], [0.05, 0.1]))


class TestChainHamiltonian:
    """Tests for the dense chain Hamiltonian."""

    def test_hermitian(self):
        """The dense Hamiltonian is Hermitian."""
        H = chain_hamiltonian(6, 0.7)
        assert np.allclose(H, H.conj().T)

    def test_zero_field_ground_energy(self):
        """At zero field the periodic chain has a doubly degenerate ground energy -N."""
        energies = linalg.eigvalsh(chain_hamiltonian(6, 0.0))
        assert energies[0] == pytest.approx(-6.0)
        # Two ferromagnetic ground states
        assert energies[1] == pytest.approx(-6.0)

    def test_open_chain_has_one_bond_less(self):
        """Dropping the wrap-around bond raises the ground energy by one."""
        energies = linalg.eigvalsh(chain_hamiltonian(6, 0.0, boundary=Boundary.OPEN))
        assert energies[0] == pytest.approx(-5.0)

    def test_size_limit(self):
        """Chains beyond the dense limit are refused."""
        with pytest.raises(SizeError):
            chain_hamiltonian(12, 1.0)


class TestEdOracle:
    """Tests for the brute-force echo."""

    @pytest.mark.parametrize('N,lam,delta', ORACLE_CASES)
    def test_matches_mode_solution(self, N, lam, delta):
        """Exact diagonalization reproduces the mode product to 1e-10."""
        params = IsingParams(N=N, lam=lam, delta=delta)
        grid = TimeGrid.uniform(10.0, 201)
        modes = loschmidt_echo(params, grid).values
        exact = ed_oracle(params, grid).values
        assert np.max(np.abs(modes - exact)) < 1e-10

    def test_open_boundary(self):
        """The open chain gives an echo in [0, 1] starting at one."""
        params = IsingParams(N=6, lam=0.8, delta=0.1, boundary=Boundary.OPEN)
        traj = ed_oracle(params, TimeGrid.uniform(5.0, 51))
        assert traj.values[0] == pytest.approx(1.0)
        assert np.all((traj.values >= 0.0) & (traj.values <= 1.0))

    def test_small_chain_revives(self):
        """A six-site chain shows revivals within t = 20."""
        params = IsingParams(N=6, lam=0.5, delta=0.05)
        values = ed_oracle(params, TimeGrid.uniform(20.0, 2001)).values
        assert np.any(np.diff(values) > 0.0)

    def test_size_limit(self):
        """The oracle refuses chains beyond the dense limit."""
        with pytest.raises(SizeError):
            ed_oracle(IsingParams(N=12, lam=1.0, delta=0.1), TimeGrid.uniform(1.0, 3))
