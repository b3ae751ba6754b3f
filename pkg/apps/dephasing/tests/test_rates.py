"""
Tests for closed-form and quadrature dephasing rates.
"""
import numpy as np
import pytest

from apps.dephasing.rates import (
    decoherence_factor,
    decoherence_factor_at,
    gamma_analytic,
    gamma_numeric,
)
from apps.qdyn.exceptions import DomainError, GammaPoleError
from apps.qdyn.grids import TimeGrid
from apps.spectral.convexity import is_convex
from apps.spectral.spectra import OhmicSpectrum, Temperature, TabulatedSpectrum

TIMES = np.linspace(0.0, 50.0, 2001)


class TestGammaAnalytic:
    """Tests for the closed-form Ohmic rates."""

    def test_ohmic_zero_temperature(self):
        """s = 1 at T = 0 reduces to t / (1 + t^2)."""
        t = np.array([0.0, 0.5, 1.0, 3.0])
        expected = t / (1.0 + t * t)
        assert gamma_analytic(1.0, 1.0, t, 'zero') == pytest.approx(expected, abs=1e-14)

    def test_scalar_in_scalar_out(self):
        """Scalar times give a plain float."""
        assert isinstance(gamma_analytic(2.0, 1.0, 1.0), float)

    @pytest.mark.parametrize('s, negative', [(1.0, False), (2.0, False), (2.1, True), (2.5, True), (3.0, True)])
    def test_zero_temperature_threshold(self, s, negative):
        """At T = 0 the rate turns negative only above s = 2."""
        assert bool(gamma_analytic(s, 1.0, TIMES, 'zero').min() < 0.0) == negative

    @pytest.mark.parametrize('s, negative', [(2.0, False), (3.0, False), (3.2, True), (3.5, True), (4.0, True)])
    def test_high_temperature_threshold(self, s, negative):
        """In the high-temperature limit the threshold moves to s = 3."""
        rates = gamma_analytic(s, 1.0, TIMES, 'high', T=50.0)
        assert bool(rates.min() < 0.0) == negative

    @pytest.mark.parametrize('s', [0.5, 1.0])
    def test_high_temperature_pole(self, s):
        """s <= 1 has no high-temperature closed form."""
        with pytest.raises(GammaPoleError):
            gamma_analytic(s, 1.0, 1.0, 'high', T=10.0)

    def test_high_temperature_needs_positive_T(self):
        """The high-temperature form needs T > 0."""
        with pytest.raises(DomainError):
            gamma_analytic(3.0, 1.0, 1.0, 'high', T=0.0)

    def test_finite_regime_rejected(self):
        """The finite regime has no closed form."""
        with pytest.raises(DomainError):
            gamma_analytic(3.0, 1.0, 1.0, 'finite', T=1.0)

    def test_negative_time_rejected(self):
        """Times must be non-negative."""
        with pytest.raises(DomainError):
            gamma_analytic(1.0, 1.0, -1.0)

    @pytest.mark.parametrize('s', [1.0, 2.0, 2.5, 3.0])
    def test_sign_matches_convexity(self, s):
        """Monotone coherence decay and a convex thermal weight go together."""
        verdict = is_convex(OhmicSpectrum(s=s), Temperature.zero(), (1e-3, 10.0))
        monotone = gamma_analytic(s, 1.0, TIMES, 'zero').min() >= -1e-12
        assert bool(verdict.convex) == bool(monotone)


class TestGammaNumeric:
    """Quadrature rates against the closed forms."""

    @pytest.mark.parametrize('s', [1.0, 2.5, 3.0])
    @pytest.mark.parametrize('t', [0.5, 1.0, 2.0, 5.0])
    def test_zero_temperature(self, s, t):
        """Quadrature matches the zero-temperature closed forms."""
        numeric = gamma_numeric(OhmicSpectrum(s=s), Temperature.zero(), t)
        analytic = gamma_analytic(s, 1.0, t, 'zero')
        assert numeric == pytest.approx(analytic, rel=1e-6, abs=1e-9)

    @pytest.mark.parametrize('t', [1.0, 2.0])
    def test_high_temperature_limit(self, t):
        """Quadrature approaches the high-temperature limit."""
        numeric = gamma_numeric(OhmicSpectrum(s=4.0), Temperature.high(100.0), t)
        analytic = gamma_analytic(4.0, 1.0, t, 'high', T=100.0)
        assert numeric == pytest.approx(analytic, rel=1e-3)

    def test_zero_time(self):
        """The rate vanishes at t = 0."""
        assert gamma_numeric(OhmicSpectrum(s=1.0), Temperature.finite(1.0), 0.0) == 0.0

    def test_vectorized(self):
        """Array times give array rates."""
        t = np.array([0.5, 1.0])
        values = gamma_numeric(OhmicSpectrum(s=1.0), Temperature.zero(), t)
        assert values.shape == (2,)


class TestDecoherenceFactor:
    """Tests for Gamma(t) by quadrature."""

    @pytest.mark.parametrize('t', [0.1, 1.0, 4.0, 20.0])
    def test_ohmic_logarithm(self, t):
        """The Ohmic factor is log(1 + t^2) / 2."""
        value = decoherence_factor_at(OhmicSpectrum(s=1.0), Temperature.zero(), t)
        assert value == pytest.approx(0.5 * np.log1p(t * t), abs=1e-8)

    @pytest.mark.parametrize('t', [0.5, 1.0, 3.0])
    def test_super_ohmic_closed_form(self, t):
        """The s = 3 factor matches its closed form."""
        value = decoherence_factor_at(OhmicSpectrum(s=3.0), Temperature.zero(), t)
        expected = 1.0 - (1.0 - t * t) / (1.0 + t * t) ** 2
        assert value == pytest.approx(expected, abs=1e-8)

    def test_temperature_increases_decay(self):
        """Temperature speeds up decoherence."""
        cold = decoherence_factor_at(OhmicSpectrum(s=1.0), Temperature.zero(), 2.0)
        warm = decoherence_factor_at(OhmicSpectrum(s=1.0), Temperature.finite(0.5), 2.0)
        assert warm > cold

    def test_trajectory(self):
        """The trajectory matches the Ohmic closed form on every grid point."""
        grid = TimeGrid.uniform(5.0, 11)
        traj = decoherence_factor(OhmicSpectrum(s=1.0), Temperature.zero(), grid)
        assert traj.values[0] == 0.0
        assert traj.values == pytest.approx(0.5 * np.log1p(grid.points ** 2), abs=1e-8)

    def test_threads_give_same_values(self):
        """Threaded quadrature gives the serial values."""
        grid = TimeGrid.uniform(5.0, 9)
        spec = OhmicSpectrum(s=2.5)
        serial = decoherence_factor(spec, Temperature.finite(0.3), grid)
        threaded = decoherence_factor(spec, Temperature.finite(0.3), grid, max_workers=3)
        assert np.array_equal(serial.values, threaded.values)

    def test_zero_spectrum(self):
        """A vanishing spectral density never decoheres."""
        spec = TabulatedSpectrum(np.linspace(0.1, 10.0, 50), np.zeros(50))
        assert decoherence_factor_at(spec, Temperature.zero(), 3.0) == 0.0

    def test_negative_time_rejected(self):
        """Negative times are rejected."""
        with pytest.raises(DomainError):
            decoherence_factor_at(OhmicSpectrum(s=1.0), Temperature.zero(), -1.0)
