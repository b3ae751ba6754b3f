"""
Tests for the dephasing channel, the solution container and the
master-equation residual.
"""
import numpy as np
import pytest

from apps.dephasing.channel import DephasingChannel, apply_dephasing, master_equation_residual
from apps.dephasing.solution import DephasingSolution, QubitFrequency, solve_dephasing
from apps.qdyn.exceptions import DomainError, GridError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.states import QubitState
from apps.spectral.spectra import OhmicSpectrum, Temperature


def closed_form_solution(n=2001, t_max=5.0, rate_scale=1.0):
    grid = TimeGrid.uniform(t_max, n)
    t = grid.points
    rates = Trajectory(grid, rate_scale * t / (1.0 + t * t), SignalKind.RATE)
    factor = Trajectory(grid, 0.5 * np.log1p(t * t), SignalKind.GAMMA_CUMULATIVE)
    return DephasingSolution(rates, factor, None, Temperature.zero())


class TestApplyDephasing:
    """Tests for apply_dephasing."""

    def test_coherence_scaled(self):
        """The coherence is scaled by exp(-Gamma)."""
        state = apply_dephasing(QubitState.plus(), np.log(2.0))
        assert state.coherence == pytest.approx(0.25)
        assert state.excited_population == pytest.approx(0.5)

    def test_populations_untouched(self):
        """Populations are left unchanged."""
        rho0 = QubitState.from_bloch(0.3, -0.4, 0.5)
        state = apply_dephasing(rho0, 3.0)
        assert state.bloch[2] == pytest.approx(0.5)

    def test_negative_factor_rejected(self):
        """A negative Gamma is rejected."""
        with pytest.raises(DomainError):
            apply_dephasing(QubitState.plus(), -0.1)

    def test_channel_reads_trajectory(self):
        """DephasingChannel reads Gamma off the trajectory."""
        solution = closed_form_solution(n=11)
        channel = DephasingChannel(solution.Gamma_traj)
        state = channel(QubitState.plus(), 1.0)
        assert state.coherence.real == pytest.approx(0.5 / np.sqrt(2.0))

    def test_channel_needs_factor(self):
        """The channel needs a cumulative factor, not a rate."""
        with pytest.raises(GridError):
            DephasingChannel(closed_form_solution(n=11).gamma_traj)


class TestMasterEquationResidual:
    """The exact solution satisfies the time-local master equation."""

    def test_residual_small(self):
        """The closed-form pair solves the master equation."""
        solution = closed_form_solution()
        rho0 = QubitState.from_bloch(0.6, 0.0, 0.8)
        assert master_equation_residual(solution, rho0, solution.grid) < 1e-4

    def test_wrong_rate_detected(self):
        """A wrong rate leaves a visible residual."""
        solution = closed_form_solution(rate_scale=2.0)
        assert master_equation_residual(solution, QubitState.plus(), solution.grid) > 0.05

    def test_grid_mismatch(self):
        """The residual grid must match the solution grid."""
        solution = closed_form_solution(n=101)
        with pytest.raises(GridError):
            master_equation_residual(solution, QubitState.plus(), TimeGrid.uniform(5.0, 51))


class TestDephasingSolution:
    """Tests for DephasingSolution and solve_dephasing."""

    def test_consistency_of_closed_forms(self):
        """The closed-form rate integrates to the closed-form factor."""
        assert closed_form_solution().consistency_error() < 1e-5

    def test_nonzero_initial_factor_rejected(self):
        """Gamma(0) must vanish."""
        grid = TimeGrid.uniform(1.0, 3)
        with pytest.raises(DomainError):
            DephasingSolution(
                Trajectory(grid, [0.0, 0.1, 0.2], SignalKind.RATE),
                Trajectory(grid, [0.1, 0.2, 0.3], SignalKind.GAMMA_CUMULATIVE),
                None, Temperature.zero(),
            )

    def test_solve_dephasing(self):
        """The two quadratures agree and match the Ohmic closed form."""
        grid = TimeGrid.uniform(5.0, 201)
        solution = solve_dephasing(OhmicSpectrum(s=1.0), Temperature.zero(), grid)
        assert solution.consistency_error() < 1e-3
        assert solution.coherence()[-1] == pytest.approx(1.0 / np.sqrt(26.0), abs=1e-8)

    def test_solution_keeps_spectrum(self):
        """The solution records the spectral density it came from."""
        spectrum = OhmicSpectrum(s=3.0)
        temperature = Temperature.zero()
        solution = solve_dephasing(spectrum, temperature, TimeGrid.uniform(1.0, 11))
        assert solution.source is spectrum
        assert solution.temperature is temperature
        assert closed_form_solution(n=5).source is None

    def test_csv(self, tmp_path):
        """The CSV carries a units comment and three columns."""
        path = closed_form_solution(n=5).to_csv(tmp_path / 'dephasing.csv')
        lines = path.read_text().splitlines()
        assert lines[1] == 't,gamma,Gamma'
        data = np.loadtxt(path, delimiter=',', skiprows=2)
        assert data.shape == (5, 3)


class TestQubitFrequency:
    """The bare splitting only rotates the coherence phase."""

    def test_modulus_kept(self):
        """Free rotation keeps """
        state = QubitFrequency(3.0).rotate(QubitState.plus(), 0.7)
        assert abs(state.coherence) == pytest.approx(0.5)

    def test_non_finite(self):
        """The splitting must be finite."""
        with pytest.raises(DomainError):
            QubitFrequency(float('inf'))
