"""
Non-Markovianity measures built on the trace distance.

Every measure reduces to the same computation: find the maximal time
intervals on which a distinguishability signal D(t) rises and add up the
gains D(b) - D(a). For pure dephasing the optimal pair gives D = e^{-Gamma},
for the Ising probe D = sqrt(L).
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from apps.qdyn import export
from apps.qdyn.exceptions import AmbiguousIntervalError, DomainError, GridError
from apps.qdyn.grids import SignalKind, Trajectory

logger = logging.getLogger(__name__)

# Rises smaller than this are rounding noise, not backflow
NOISE_FLOOR = 1e-12
INITIAL_GAMMA_ATOL = 1e-12
ECHO_ATOL = 1e-9

Interval = Tuple[float, float]


class MeasureMethod(str, enum.Enum):
    ANALYTIC_DEPHASING = 'analytic-dephasing'
    PAIR_SAMPLED = 'pair-sampled'
    MODIFIED = 'modified'
    ECHO = 'echo'


@dataclass(frozen=True)
class MeasureReport:
    """Value of a measure together with the intervals that produced it."""

    value: float
    intervals: Tuple[Interval, ...]
    t_cut: float
    method: MeasureMethod
    gains: Tuple[float, ...] = ()
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'method', MeasureMethod(self.method))
        object.__setattr__(self, 'intervals', tuple((float(a), float(b)) for a, b in self.intervals))
        object.__setattr__(self, 'gains', tuple(float(g) for g in self.gains))
        object.__setattr__(self, 'warnings', tuple(self.warnings))
        if not self.value >= 0.0:
            raise DomainError(f'Measure value must be non-negative, got {self.value}')
        if self.method is MeasureMethod.MODIFIED and self.value > 1.0:
            raise DomainError(f'Modified measure must lie in [0, 1], got {self.value}')
        previous_end = -np.inf
        for a, b in self.intervals:
            if not previous_end <= a < b <= self.t_cut:
                raise DomainError(f'Interval ({a}, {b}) is not ordered inside [0, {self.t_cut}]')
            previous_end = b

    @property
    def is_markovian(self) -> bool:
        return self.value == 0.0

    def as_dict(self) -> dict:
        return {
            'value': self.value,
            'intervals': [list(interval) for interval in self.intervals],
            't_cut': self.t_cut,
            'method': self.method.value,
        }

    def to_json(self, path: Union[str, Path]) -> Path:
        return export.write_json(path, self.as_dict())


# =============================================================================
# RISING INTERVALS
# =============================================================================

@dataclass(frozen=True)
class _Rise:
    a: float
    b: float
    start: float
    end: float

    @property
    def gain(self) -> float:
        return self.end - self.start


def resolve_t_cut(times: np.ndarray, t_cut: Optional[float]) -> float:
    if t_cut is None:
        return float(times[-1])
    if not 0.0 < t_cut <= times[-1] * (1.0 + 1e-12):
        raise DomainError(f't_cut={t_cut} must lie in (0, {times[-1]}]')
    return min(float(t_cut), float(times[-1]))


def truncate(times: np.ndarray, values: np.ndarray, t_cut: float) -> Tuple[np.ndarray, np.ndarray]:
    """Keep samples up to t_cut and close the signal with its interpolated value at t_cut."""
    keep = times <= t_cut
    t, v = times[keep], values[keep]
    if t[-1] < t_cut:
        t = np.append(t, t_cut)
        v = np.append(v, np.interp(t_cut, times, values))
    return t, v


def _vertex(times: np.ndarray, values: np.ndarray, i: int) -> Tuple[float, float]:
    """Vertex of the parabola through samples i-1, i, i+1."""
    t0, t1, t2 = times[i - 1:i + 2]
    v0, v1, v2 = values[i - 1:i + 2]
    coeffs = np.polyfit([t0 - t1, 0.0, t2 - t1], [v0, v1, v2], 2)
    if coeffs[0] == 0.0:
        return t1, v1
    shift = -coeffs[1] / (2.0 * coeffs[0])
    return t1 + shift, float(np.polyval(coeffs, shift))


def _refine(times: np.ndarray, values: np.ndarray, i: int, lowest: bool) -> Tuple[float, float]:
    t, v = float(times[i]), float(values[i])
    if i == 0 or i == times.size - 1:
        return t, v
    t_star, v_star = _vertex(times, values, i)
    inside = times[i - 1] <= t_star <= times[i + 1]
    better = v_star <= v if lowest else v_star >= v
    if inside and better:
        return t_star, v_star
    return t, v


def rising_intervals(times: np.ndarray, values: np.ndarray, refine: bool = True,
                     noise_floor: float = NOISE_FLOOR) -> List[_Rise]:
    """
    Maximal intervals on which a sampled signal rises.

    Endpoints at interior extrema are moved to the vertex of the parabola
    through the neighbouring samples when `refine` is set; intervals stay
    ordered and disjoint.
    """
    steps = np.diff(values)
    rising = steps > noise_floor
    rises: List[_Rise] = []
    index = 0
    while index < rising.size:
        if not rising[index]:
            index += 1
            continue
        first = index
        while index < rising.size and rising[index]:
            index += 1
        last = index

        a, start = float(times[first]), float(values[first])
        b, end = float(times[last]), float(values[last])
        if refine:
            a_ref, start_ref = _refine(times, values, first, lowest=True)
            b_ref, end_ref = _refine(times, values, last, lowest=False)
            floor = rises[-1].b if rises else -np.inf
            if floor <= a_ref < b_ref:
                a, start = a_ref, start_ref
            if a < b_ref:
                b, end = b_ref, end_ref
        rises.append(_Rise(a, b, start, end))
    return rises


def _report(rises: List[_Rise], t_cut: float, method: MeasureMethod,
            warnings: Tuple[str, ...] = ()) -> MeasureReport:
    gains = tuple(rise.gain for rise in rises)
    return MeasureReport(
        value=float(sum(gains)),
        intervals=tuple((rise.a, rise.b) for rise in rises),
        t_cut=t_cut,
        method=method,
        gains=gains,
        warnings=warnings,
    )


def _check_kind(traj: Trajectory, kind: SignalKind) -> None:
    if traj.kind is not kind:
        raise GridError(f'Expected a {kind.value} trajectory, got {traj.kind.value}')


def _dephasing_rises(Gamma_traj: Trajectory, t_cut: Optional[float],
                     refine: bool) -> Tuple[List[_Rise], float]:
    _check_kind(Gamma_traj, SignalKind.GAMMA_CUMULATIVE)
    Gamma = np.real(np.asarray(Gamma_traj.values, dtype=complex))
    if not np.all(np.isfinite(Gamma)):
        raise DomainError('Decoherence factor has non-finite samples')
    if abs(Gamma[0]) > INITIAL_GAMMA_ATOL:
        raise DomainError(f'Gamma(0) must vanish, got {Gamma[0]}')
    t_cut = resolve_t_cut(Gamma_traj.times, t_cut)
    times, distinguishability = truncate(Gamma_traj.times, np.exp(-Gamma), t_cut)
    return rising_intervals(times, distinguishability, refine), t_cut


# =============================================================================
# MEASURES
# =============================================================================

def blp_dephasing(Gamma_traj: Trajectory, t_cut: Optional[float] = None,
                  refine: bool = True) -> MeasureReport:
    """
    Trace-distance measure of a pure-dephasing evolution.

    The optimal pair of initial states gives D(t) = e^{-Gamma(t)}, so the
    measure is the sum of e^{-Gamma(b)} - e^{-Gamma(a)} over the intervals
    on which Gamma decreases.

    Args:
        Gamma_traj: Decoherence factor with Gamma(0) = 0.
        t_cut: Last time taken into account (defaults to the grid end).
        refine: Locate interior extrema by parabolic interpolation; switch
            off for piecewise-linear data.

    Examples:
        >>> grid = TimeGrid(np.arange(5.0))
        >>> Gamma = Trajectory(grid, [0.0, 0.5, 1.0, 0.5, 0.8], SignalKind.GAMMA_CUMULATIVE)
        >>> round(blp_dephasing(Gamma, refine=False).value, 5)
        0.23865
    """
    rises, t_cut = _dephasing_rises(Gamma_traj, t_cut, refine)
    return _report(rises, t_cut, MeasureMethod.ANALYTIC_DEPHASING)


def modified_measure(Gamma_traj: Trajectory, t_cut: Optional[float] = None,
                     refine: bool = True, strict: bool = True) -> MeasureReport:
    """
    Fraction of the information lost before a single backflow interval
    [a, b] that returns during it:

        (e^{-Gamma(b)} - e^{-Gamma(a)}) / (e^{-Gamma(0)} - e^{-Gamma(a)})

    With `strict` a second decreasing interval raises. Otherwise such a
    signal gets the trace-distance sum over all intervals (blp_dephasing),
    reported under that method and with a warning.
    """
    rises, t_cut = _dephasing_rises(Gamma_traj, t_cut, refine)
    if not rises:
        return _report([], t_cut, MeasureMethod.MODIFIED)

    if len(rises) > 1:
        message = (
            f'Gamma decreases on {len(rises)} intervals; the modified measure needs a single one. '
            'Use blp_dephasing for repeated backflow.'
        )
        if strict:
            raise AmbiguousIntervalError(message)
        logger.warning('%s Reporting the trace-distance sum instead.', message)
        return _report(rises, t_cut, MeasureMethod.ANALYTIC_DEPHASING, (message,))

    first = rises[0]
    lost = np.exp(-np.real(Gamma_traj.values[0])) - first.start
    if lost <= 0.0:
        raise DomainError('No information was lost before the backflow interval')
    value = min(first.gain / lost, 1.0)
    return MeasureReport(
        value=value,
        intervals=((first.a, first.b),),
        t_cut=t_cut,
        method=MeasureMethod.MODIFIED,
        gains=(first.gain,),
    )


def echo_measure(L_traj: Trajectory, t_cut: Optional[float] = None,
                 refine: bool = True) -> MeasureReport:
    """
    Sum of sqrt(L(b)) - sqrt(L(a)) over the intervals where the echo rises.

    Extrema are located on L itself, which is smooth where it touches zero,
    and only then mapped to amplitudes.
    """
    _check_kind(L_traj, SignalKind.ECHO)
    echo = np.real(np.asarray(L_traj.values, dtype=complex))
    if not np.all(np.isfinite(echo)) or echo.min() < -ECHO_ATOL or echo.max() > 1.0 + ECHO_ATOL:
        raise DomainError('Loschmidt echo must lie in [0, 1]')
    t_cut = resolve_t_cut(L_traj.times, t_cut)
    times, echo = truncate(L_traj.times, np.clip(echo, 0.0, 1.0), t_cut)
    rises = [
        _Rise(rise.a, rise.b, _amplitude(rise.start), _amplitude(rise.end))
        for rise in rising_intervals(times, echo, refine)
    ]
    return _report(rises, t_cut, MeasureMethod.ECHO)


def _amplitude(echo: float) -> float:
    return math.sqrt(min(max(echo, 0.0), 1.0))


def divisibility_witness(gamma_traj: Trajectory) -> List[Interval]:
    """
    Intervals on which the dephasing rate is negative.

    Crossing times are found by linear interpolation between the samples
    that bracket a sign change. An empty list means the evolution is
    divisible.
    """
    _check_kind(gamma_traj, SignalKind.RATE)
    times = gamma_traj.times
    rates = np.real(np.asarray(gamma_traj.values, dtype=complex))
    negative = rates < 0.0

    def crossing(i: int) -> float:
        # zero of the chord between samples i and i+1
        t0, t1, g0, g1 = times[i], times[i + 1], rates[i], rates[i + 1]
        return float(t0 - g0 * (t1 - t0) / (g1 - g0))

    intervals: List[Interval] = []
    index = 0
    while index < negative.size:
        if not negative[index]:
            index += 1
            continue
        first = index
        while index < negative.size and negative[index]:
            index += 1
        last = index - 1
        a = float(times[0]) if first == 0 else crossing(first - 1)
        b = float(times[-1]) if last == negative.size - 1 else crossing(last)
        intervals.append((a, b))
    return intervals
