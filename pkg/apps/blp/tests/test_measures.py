"""
Tests for the trace-distance measures and the divisibility witness.
"""
import json

import numpy as np
import pytest

from apps.blp.measures import (
    MeasureMethod,
    MeasureReport,
    blp_dephasing,
    divisibility_witness,
    echo_measure,
    modified_measure,
)
from apps.dephasing.rates import gamma_analytic
from apps.qdyn.exceptions import AmbiguousIntervalError, DomainError, GridError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory

SQRT3 = np.sqrt(3.0)


def gamma_traj(values):
    grid = TimeGrid(np.arange(len(values), dtype=float))
    return Trajectory(grid, values, SignalKind.GAMMA_CUMULATIVE)


def super_ohmic_factor(t_max=10.0, n=4001):
    """Closed-form Gamma(t) of the s = 3 zero-temperature bath."""
    grid = TimeGrid.uniform(t_max, n)
    t = grid.points
    return Trajectory(grid, 1.0 - (1.0 - t * t) / (1.0 + t * t) ** 2, SignalKind.GAMMA_CUMULATIVE)


def super_ohmic_D(t):
    return np.exp(-(1.0 - (1.0 - t * t) / (1.0 + t * t) ** 2))


class TestMeasureReport:
    """Tests for MeasureReport validation and export."""

    def test_negative_value_rejected(self):
        """Measures are never negative."""
        with pytest.raises(DomainError):
            MeasureReport(-0.1, (), 1.0, 'echo')

    def test_overlapping_intervals_rejected(self):
        """Backflow intervals may not overlap."""
        with pytest.raises(DomainError):
            MeasureReport(0.1, ((0.0, 0.6), (0.5, 0.8)), 1.0, 'echo')

    def test_interval_beyond_cut_rejected(self):
        """Intervals must end at or before t_cut."""
        with pytest.raises(DomainError):
            MeasureReport(0.1, ((0.2, 1.5),), 1.0, 'echo')

    def test_modified_bounded(self):
        """The modified measure cannot exceed one."""
        with pytest.raises(DomainError):
            MeasureReport(1.5, (), 1.0, 'modified')

    def test_json(self, tmp_path):
        """JSON export rounds the value and drops the warnings."""
        report = MeasureReport(0.123456789012345, ((0.5, 0.75),), 2.0, 'analytic-dephasing', (0.1,))
        payload = json.loads(report.to_json(tmp_path / 'report.json').read_text())
        assert payload == {
            'value': 0.123456789012,
            'intervals': [[0.5, 0.75]],
            't_cut': 2.0,
            'method': 'analytic-dephasing',
        }


class TestBlpDephasing:
    """Tests for blp_dephasing."""

    def test_monotone(self):
        """A non-decreasing Gamma gives no backflow."""
        report = blp_dephasing(gamma_traj([0.0, 0.1, 0.4, 0.9, 1.6]))
        assert report.value == 0.0
        assert report.intervals == ()
        assert report.is_markovian

    def test_single_dip(self):
        """One dip contributes exp(-Gamma_min) - exp(-Gamma_max)."""
        report = blp_dephasing(gamma_traj([0.0, 0.5, 1.0, 0.75, 0.5, 0.8]), refine=False)
        assert report.value == pytest.approx(np.exp(-0.5) - np.exp(-1.0), abs=1e-12)
        assert report.value == pytest.approx(0.23865, abs=1e-5)
        assert report.intervals == ((2.0, 4.0),)
        assert report.method is MeasureMethod.ANALYTIC_DEPHASING

    def test_gains_add_up(self):
        """The value is the sum of the per-interval gains."""
        report = blp_dephasing(gamma_traj([0.0, 1.0, 0.4, 1.2, 0.3, 0.9, 0.8]), refine=False)
        assert len(report.intervals) == 3
        assert report.value == pytest.approx(sum(report.gains), abs=1e-12)

    def test_nonzero_start_rejected(self):
        """Gamma must start at zero."""
        with pytest.raises(DomainError):
            blp_dephasing(gamma_traj([0.1, 0.2, 0.3]))

    def test_wrong_kind_rejected(self):
        """Only cumulative Gamma trajectories are accepted."""
        grid = TimeGrid.uniform(1.0, 3)
        with pytest.raises(GridError):
            blp_dephasing(Trajectory(grid, [0.0, 0.1, 0.2], SignalKind.ECHO))

    def test_super_ohmic(self):
        """The s = 3 bath backflows from sqrt(3) to the end of the window."""
        report = blp_dephasing(super_ohmic_factor())
        (a, b), = report.intervals
        assert a == pytest.approx(SQRT3, abs=1e-4)
        assert b == 10.0
        assert report.value == pytest.approx(super_ohmic_D(10.0) - super_ohmic_D(SQRT3), rel=1e-6)

    def test_interval_matches_negative_rate(self):
        """The backflow interval is where the rate is negative."""
        Gamma = super_ohmic_factor()
        rates = gamma_analytic(3.0, 1.0, Gamma.times, 'zero')
        a, b = blp_dephasing(Gamma).intervals[0]
        inside = (Gamma.times > a + 0.01) & (Gamma.times < b)
        outside = Gamma.times < a - 0.01
        assert np.all(rates[inside] < 0.0)
        assert np.all(rates[outside] >= 0.0)

    def test_truncation(self):
        """t_cut truncates the last interval."""
        report = blp_dephasing(super_ohmic_factor(), t_cut=5.0)
        assert report.intervals[-1][1] == 5.0
        assert report.value == pytest.approx(super_ohmic_D(5.0) - super_ohmic_D(SQRT3), rel=1e-6)

    def test_cut_off_grid_point(self):
        """A cut between samples interpolates Gamma linearly."""
        report = blp_dephasing(gamma_traj([0.0, 1.0, 0.5, 0.5]), t_cut=1.5, refine=False)
        assert report.intervals == ((1.0, 1.5),)
        assert report.value == pytest.approx(0.5 * (np.exp(-0.5) - np.exp(-1.0)))

    def test_cut_beyond_grid(self):
        """t_cut beyond the grid is rejected."""
        with pytest.raises(DomainError):
            blp_dephasing(gamma_traj([0.0, 1.0, 0.5]), t_cut=3.0)


class TestModifiedMeasure:
    """Tests for the bounded single-interval measure."""

    def test_monotone(self):
        """A monotone Gamma reports zero with the modified method."""
        report = modified_measure(gamma_traj([0.0, 0.3, 0.6]))
        assert report.value == 0.0
        assert report.method is MeasureMethod.MODIFIED

    def test_full_recovery(self):
        """Returning to Gamma = 0 gives the maximal value of one."""
        assert modified_measure(gamma_traj([0.0, 0.5, 1.0, 0.5, 0.0]), refine=False).value == 1.0

    def test_partial_recovery(self):
        """Partial recovery is normalised by 1 - exp(-Gamma_a)."""
        report = modified_measure(gamma_traj([0.0, 0.5, 1.0, 0.75, 0.5]), refine=False)
        expected = (np.exp(-0.5) - np.exp(-1.0)) / (1.0 - np.exp(-1.0))
        assert report.value == pytest.approx(expected, abs=1e-12)
        assert report.value == pytest.approx(0.37754, abs=1e-5)

    def test_two_intervals_strict(self):
        """Strict mode refuses more than one interval."""
        with pytest.raises(AmbiguousIntervalError):
            modified_measure(gamma_traj([0.0, 1.0, 0.5, 1.2, 0.6]))

    def test_two_intervals_lenient(self):
        """Repeated backflow falls back to the trace-distance sum over every interval."""
        Gamma = gamma_traj([0.0, 1.0, 0.5, 1.2, 0.6])
        report = modified_measure(Gamma, refine=False, strict=False)
        assert report.method is MeasureMethod.ANALYTIC_DEPHASING
        assert report.intervals == ((1.0, 2.0), (3.0, 4.0))
        expected = (np.exp(-0.5) - np.exp(-1.0)) + (np.exp(-0.6) - np.exp(-1.2))
        assert report.value == pytest.approx(expected, abs=1e-12)
        assert report.value == pytest.approx(blp_dephasing(Gamma, refine=False).value, abs=1e-12)
        assert len(report.warnings) == 1

    def test_single_interval_lenient_has_no_warning(self):
        """Non-strict mode changes nothing when there is one interval."""
        report = modified_measure(gamma_traj([0.0, 0.5, 1.0, 0.75, 0.5]), refine=False, strict=False)
        assert report.method is MeasureMethod.MODIFIED
        assert not report.warnings

    def test_relation_to_blp(self):
        """The modified value rescales the trace-distance sum by its interval start."""
        Gamma = super_ohmic_factor()
        blp = blp_dephasing(Gamma, refine=False)
        modified = modified_measure(Gamma, refine=False)
        a = blp.intervals[0][0]
        Gamma_a = Gamma.values[int(np.searchsorted(Gamma.times, a))]
        assert modified.value == pytest.approx(blp.value / (1.0 - np.exp(-Gamma_a)), abs=1e-12)
        assert 0.0 <= modified.value <= 1.0


class TestEchoMeasure:
    """Tests for the Loschmidt-echo measure."""

    @staticmethod
    def echo(values, times=None):
        times = np.arange(len(values), dtype=float) if times is None else times
        return Trajectory(TimeGrid(times), values, SignalKind.ECHO)

    def test_constant(self):
        """A constant echo has no rises."""
        assert echo_measure(self.echo([0.7, 0.7, 0.7])).value == 0.0

    def test_two_rises(self):
        """Each rise of sqrt(L) adds to the measure."""
        report = echo_measure(self.echo([0.25, 0.64, 0.36, 0.81]), refine=False)
        assert report.value == pytest.approx(0.6, abs=1e-12)
        assert report.intervals == ((0.0, 1.0), (2.0, 3.0))

    @pytest.mark.parametrize('n', [1000, 1001, 2000, 2001])
    def test_cosine_squared(self, n):
        """Odd and even grids both recover the full rise of |cos t|."""
        t = np.linspace(0.0, np.pi, n)
        report = echo_measure(self.echo(np.cos(t) ** 2, t), t_cut=np.pi)
        assert report.value == pytest.approx(1.0, abs=1e-4)

    def test_grid_refinement(self):
        """Odd grids of different density agree."""
        coarse = np.linspace(0.0, np.pi, 1001)
        fine = np.linspace(0.0, np.pi, 2001)
        a = echo_measure(self.echo(np.cos(coarse) ** 2, coarse)).value
        b = echo_measure(self.echo(np.cos(fine) ** 2, fine)).value
        assert abs(a - b) < 1e-4

    def test_even_grids_converge(self):
        """With the zero of cos t between samples, doubling the grid moves the value by < 1e-4."""
        values = []
        for n in (1000, 2000, 4000, 8000):
            t = np.linspace(0.0, np.pi, n)
            values.append(echo_measure(self.echo(np.cos(t) ** 2, t), t_cut=np.pi).value)
        assert np.all(np.abs(np.diff(values)) < 1e-4)
        assert all(value == pytest.approx(1.0, abs=1e-4) for value in values)

    def test_minimum_between_samples(self):
        """The rise starts at the parabolic vertex of L, not at the nearest sample."""
        t = np.linspace(0.0, np.pi, 10)
        report = echo_measure(self.echo(np.cos(t) ** 2, t), t_cut=np.pi)
        assert report.intervals[0][0] == pytest.approx(np.pi / 2, abs=1e-6)
        assert report.value > 1.0 - np.sqrt(np.cos(t[4]) ** 2)
        assert report.value == pytest.approx(1.0 - np.sqrt(3.0) / 4.0 * (t[1] ** 2), abs=0.01)

    def test_out_of_range(self):
        """Echo values above one are rejected."""
        with pytest.raises(DomainError):
            echo_measure(self.echo([1.0, 1.1, 0.9]))


class TestDivisibilityWitness:
    """Tests for the negative-rate witness."""

    @staticmethod
    def rates(s, t_max=10.0, n=2001):
        grid = TimeGrid.uniform(t_max, n)
        return Trajectory(grid, gamma_analytic(s, 1.0, grid.points, 'zero'), SignalKind.RATE)

    def test_ohmic_divisible(self):
        """Ohmic rates never turn negative."""
        assert divisibility_witness(self.rates(1.0)) == []

    def test_super_ohmic(self):
        """The s = 3 rate is negative from sqrt(3) on."""
        (a, b), = divisibility_witness(self.rates(3.0))
        assert a == pytest.approx(SQRT3, abs=1e-4)
        assert b == 10.0

    def test_zero_rate(self):
        """A zero rate is not a violation."""
        grid = TimeGrid.uniform(1.0, 5)
        assert divisibility_witness(Trajectory(grid, np.zeros(5), SignalKind.RATE)) == []

    def test_crossing_interpolated(self):
        """Sign changes are located by linear interpolation."""
        grid = TimeGrid(np.arange(4.0))
        traj = Trajectory(grid, [1.0, -1.0, -1.0, 3.0], SignalKind.RATE)
        assert divisibility_witness(traj) == [(0.5, 2.25)]
