"""
Trace-distance measure of a generic qubit channel by sampling pairs of
initial states.
"""
import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from apps.blp.measures import MeasureMethod, MeasureReport, resolve_t_cut, rising_intervals, truncate
from apps.qdyn.exceptions import DomainError
from apps.qdyn.grids import TimeGrid
from apps.qdyn.states import QubitState, trace_distance

logger = logging.getLogger(__name__)

Channel = Callable[[QubitState, float], QubitState]


class PairStrategy(str, enum.Enum):
    EQUATOR_ANTIPODAL = 'equator-antipodal'
    HAAR_ANTIPODAL = 'haar-antipodal'
    HAAR_GENERAL = 'haar-general'


def _haar_bloch(rng: np.random.Generator) -> np.ndarray:
    # isotropic Gaussian direction is uniform on the sphere
    vector = rng.standard_normal(3)
    return vector / np.linalg.norm(vector)


@dataclass(frozen=True)
class PairSampler:
    """
    Draws pairs of initial states.

    Antipodal strategies return orthogonal pure states (optimal pairs lie on
    the boundary and are orthogonal); `haar-general` draws two independent
    pure states and serves as a diagnostic.
    """

    n_pairs: int = 1
    strategy: PairStrategy = PairStrategy.EQUATOR_ANTIPODAL
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'strategy', PairStrategy(self.strategy))
        if int(self.n_pairs) < 1:
            raise DomainError(f'n_pairs must be at least 1, got {self.n_pairs}')

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([int(self.seed), int(index)])

    def pair(self, index: int) -> Tuple[QubitState, QubitState]:
        rng = self.rng(index)
        if self.strategy is PairStrategy.EQUATOR_ANTIPODAL:
            phi = rng.uniform(0.0, 2.0 * np.pi)
            x, y = np.cos(phi), np.sin(phi)
            return QubitState.from_bloch(x, y, 0.0), QubitState.from_bloch(-x, -y, 0.0)
        if self.strategy is PairStrategy.HAAR_ANTIPODAL:
            n = _haar_bloch(rng)
            return QubitState.from_bloch(*n), QubitState.from_bloch(*(-n))
        return QubitState.from_bloch(*_haar_bloch(rng)), QubitState.from_bloch(*_haar_bloch(rng))


def distinguishability(channel: Channel, pair: Tuple[QubitState, QubitState],
                       times: np.ndarray) -> np.ndarray:
    first, second = pair
    return np.array([trace_distance(channel(first, t), channel(second, t)) for t in times])


def blp_sampled(channel: Channel, sampler: PairSampler, grid: TimeGrid,
                t_cut: Optional[float] = None, refine: bool = True,
                max_workers: int = 1) -> MeasureReport:
    """
    Largest information backflow over the sampled pairs.

    The channel is evaluated on the grid points up to t_cut; each pair
    draws from its own RNG stream seeded by (seed, pair index), so the
    result does not depend on `max_workers`.

    Args:
        channel: Callable (state, t) -> state.
        sampler: Source of initial pairs.
        grid: Evaluation times.
        t_cut: Last time taken into account.
        refine: Parabolic refinement of interior extrema.
        max_workers: Threads evaluating pairs.
    """
    t_cut = resolve_t_cut(grid.points, t_cut)
    # one sample past t_cut for the interpolated value at the cut
    times = grid.points[:int(np.searchsorted(grid.points, t_cut)) + 1]

    def evaluate(index: int) -> MeasureReport:
        signal = distinguishability(channel, sampler.pair(index), times)
        t, d = truncate(times, signal, t_cut)
        rises = rising_intervals(t, d, refine)
        gains = tuple(rise.gain for rise in rises)
        return MeasureReport(
            value=float(sum(gains)),
            intervals=tuple((rise.a, rise.b) for rise in rises),
            t_cut=t_cut,
            method=MeasureMethod.PAIR_SAMPLED,
            gains=gains,
        )

    indices = range(int(sampler.n_pairs))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            reports = list(executor.map(evaluate, indices))
    else:
        reports = [evaluate(i) for i in indices]

    best = int(np.argmax([report.value for report in reports]))
    logger.debug(
        'Sampled %d %s pairs, best pair %d with value %.6g',
        sampler.n_pairs, sampler.strategy.value, best, reports[best].value,
    )
    return reports[best]
