"""
Tests for reservoir parameters, couplings and Bogoliubov modes.
"""
import math

import numpy as np
import pytest
from scipy import stats

from apps.bec.reservoir import (
    ReservoirParams,
    bare_coupling,
    bogoliubov,
    coupling_and_density,
    sound_velocity,
)
from apps.qdyn import units
from apps.qdyn.exceptions import DomainError, ValidationError


class TestReservoirParams:
    """Tests for ReservoirParams defaults and unit conversions."""

    def test_reference_energy(self):
        """Default parameters fix the energy and time units."""
        params = ReservoirParams()
        assert params.reference_energy == pytest.approx(5.07e-31, rel=1e-2)
        assert params.time_unit == pytest.approx(2.08e-4, rel=1e-2)

    def test_reduced_temperature(self):
        """Temperatures are expressed in the reference energy."""
        params = ReservoirParams(T=10 * units.NANOKELVIN)
        assert params.reduced_temperature == pytest.approx(0.272, rel=1e-2)

    def test_from_mapping(self):
        """from_mapping accepts known keys and unit-bearing values."""
        params = ReservoirParams.from_mapping({'dimension': 2, 'a_B': 0.5 * units.A_RB})
        assert params.dimension == 2
        assert params.a_B_over_aRb == pytest.approx(0.5)

    def test_unknown_key(self):
        """Unknown keys are rejected."""
        with pytest.raises(DomainError):
            ReservoirParams.from_mapping({'a_q': 1.0})

    @pytest.mark.parametrize('changes', [{'dimension': 4}, {'sigma': 0.0}, {'a_B': -1e-9}, {'T': -1.0}])
    def test_invalid(self, changes):
        """Out-of-range parameters raise DomainError."""
        with pytest.raises(DomainError):
            ReservoirParams(**changes)


class TestCouplingAndDensity:
    """Tests for the dimension-reduced couplings."""

    def test_three_dimensional(self):
        """The bulk coupling is 4 pi hbar^2 a_B / m at the peak density."""
        g_B, n_D = coupling_and_density(ReservoirParams())
        expected = 4.0 * math.pi * units.HBAR ** 2 * units.A_RB / units.MASS_RB87
        assert g_B == pytest.approx(expected, rel=1e-12)
        assert n_D == 1e20

    @pytest.mark.parametrize('dimension', [1, 2, 3])
    def test_free_gas(self, dimension):
        """A vanishing scattering length gives zero coupling in every dimension."""
        g_B, _ = coupling_and_density(ReservoirParams(a_B=0.0, dimension=dimension))
        assert g_B == 0.0

    @pytest.mark.parametrize('ratio', [0.1, 0.7, 1.3])
    def test_planar_ratio(self, ratio):
        """The planar coupling carries the Gaussian confinement factor."""
        a_B = ratio * units.A_RB
        g2, n2 = coupling_and_density(ReservoirParams(a_B=a_B, dimension=2))
        assert g2 * 200e-9 / bare_coupling(a_B, units.MASS_RB87) == pytest.approx(
            math.sqrt(8.0 * math.pi) / (4.0 * math.pi), rel=1e-12
        )
        assert n2 == pytest.approx(math.sqrt(math.pi) * 1e20 * 200e-9)

    def test_line_density(self):
        """The line density integrates the transverse Gaussian."""
        _, n1 = coupling_and_density(ReservoirParams(dimension=1))
        assert n1 == pytest.approx(1e20 * math.pi * (200e-9) ** 2)

    @pytest.mark.parametrize('dimension, ratio', [(3, 3.5), (2, 2.5), (1, 1.01)])
    def test_maximum_scattering_length(self, dimension, ratio):
        """Scattering lengths beyond the dimension limit are invalid."""
        with pytest.raises(ValidationError):
            coupling_and_density(ReservoirParams(a_B=ratio * units.A_RB, dimension=dimension))

    def test_line_maximum_inclusive(self):
        """The line limit itself is allowed."""
        coupling_and_density(ReservoirParams(a_B=units.A_RB, dimension=1))

    def test_planar_confinement(self):
        """A trap narrower than the planar limit is rejected."""
        with pytest.raises(ValidationError):
            coupling_and_density(ReservoirParams(dimension=2, a_z=50e-9))

    def test_diluteness(self):
        """Dense gases fail the diluteness check."""
        with pytest.raises(ValidationError):
            coupling_and_density(ReservoirParams(n0=1e26))


class TestBogoliubov:
    """Tests for the Bogoliubov dispersion."""

    def test_free_gas(self):
        """Without interactions the dispersion is free."""
        mode = bogoliubov(np.array([1e6, 1e7]), ReservoirParams(a_B=0.0))
        assert np.array_equal(mode.E_k, mode.eps_k)
        assert np.all(mode.uv_factor == 1.0)

    def test_identity(self):
        """(|u_k| - |v_k|)^2 equals eps_k / E_k."""
        k = np.random.default_rng(0).uniform(1e3, 1e8, 50)
        mode = bogoliubov(k, ReservoirParams())
        assert mode.uv_factor * mode.E_k == pytest.approx(mode.eps_k, rel=1e-12)

    def test_phonon_slope(self):
        """Low momenta follow the sound velocity."""
        params = ReservoirParams()
        k = np.linspace(1e3, 1e4, 20)
        slope = stats.linregress(k, bogoliubov(k, params).E_k).slope
        assert slope == pytest.approx(units.HBAR * sound_velocity(params), rel=1e-2)

    def test_scalar(self):
        """Scalar momenta give scalar energies."""
        mode = bogoliubov(1e7, ReservoirParams())
        assert isinstance(mode.E_k, float)
        assert mode.E_k > mode.eps_k

    def test_negative_wavenumber(self):
        """Negative wavenumbers are rejected."""
        with pytest.raises(DomainError):
            bogoliubov(-1.0, ReservoirParams())
