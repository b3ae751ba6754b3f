"""
Markovian to non-Markovian crossover in the boson scattering length.

For every a_B on a grid the decoherence factor is computed on [0, t_max]
and the bounded single-interval measure is evaluated; the critical a_B is
where the measure switches between zero and positive, refined by
bisection.

At T = 0 the phonon part of the spectrum always drives the rate negative
eventually, after a time of order hbar/mu. The crossover therefore marks
where that first backflow enters the observation window, and moves as
1/t_max.
"""
import logging
import multiprocessing
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import optimize

from apps.bec.decoherence import AngularMode, QubitModel, decoherence_trajectory
from apps.bec.reservoir import ReservoirParams, validate
from apps.blp.measures import MeasureMethod, modified_measure
from apps.qdyn import units
from apps.qdyn.exceptions import DomainError, NotBracketedError
from apps.qdyn.grids import TimeGrid

logger = logging.getLogger(__name__)

MEASURE_THRESHOLD = 1e-6
MIN_GRID_POINTS = 8
# Observation windows in hbar/E_ref, per condensate dimension
DEFAULT_T_MAX = {3: 10.0, 2: 10.0, 1: 20.0}
DEFAULT_N_T = 400
BISECT_XTOL = 1e-4


def default_a_B_grid() -> np.ndarray:
    """a_B / a_Rb values scanned by default."""
    return np.linspace(0.01, 0.4, 16)


def default_t_max(dimension: int) -> float:
    try:
        return DEFAULT_T_MAX[int(dimension)]
    except KeyError:
        raise DomainError(f'Condensate dimension must be 1, 2 or 3, got {dimension}') from None


@dataclass(frozen=True)
class ScanPoint:
    a_B_over_aRb: float
    measure: float
    Gamma_inf: float
    warnings: Tuple[str, ...] = ()
    method: MeasureMethod = MeasureMethod.MODIFIED

    @property
    def non_markovian(self) -> bool:
        return self.measure > MEASURE_THRESHOLD

    @property
    def single_interval(self) -> bool:
        return self.method is MeasureMethod.MODIFIED


@dataclass(frozen=True)
class CrossoverResult:
    dimension: int
    model: QubitModel
    T: float
    t_max: float
    a_B_crit_over_aRb: float
    points: Tuple[ScanPoint, ...] = field(default=())

    @property
    def a_B_crit(self) -> float:
        """Critical scattering length in metres."""
        return self.a_B_crit_over_aRb * units.A_RB

    def rows(self) -> List[Tuple[float, float, float, str]]:
        return [(p.a_B_over_aRb, p.measure, p.Gamma_inf, p.method.value) for p in self.points]

    def as_dict(self) -> dict:
        return {
            'dimension': self.dimension,
            'model': self.model.value,
            'T': self.T,
            't_max': self.t_max,
            'a_B_crit_over_aRb': self.a_B_crit_over_aRb,
            'a_B_crit': self.a_B_crit,
            'multi_interval_points': [p.a_B_over_aRb for p in self.points if not p.single_interval],
        }


def _measure_at(params: ReservoirParams, grid: TimeGrid, model: QubitModel,
                angular: AngularMode) -> ScanPoint:
    """
    Modified measure of one scan cell.

    A cell whose Gamma decreases on more than one interval is reported with
    the trace-distance sum over all of them; its method and warning say so.
    """
    Gamma = decoherence_trajectory(params, grid, model, angular)
    report = modified_measure(Gamma, strict=False)
    return ScanPoint(
        a_B_over_aRb=params.a_B_over_aRb,
        measure=report.value,
        Gamma_inf=float(Gamma.values[-1]),
        warnings=report.warnings,
        method=report.method,
    )


def _executor(max_workers: int) -> Executor:
    # Daemonic processes (Celery prefork workers) cannot start children
    if multiprocessing.current_process().daemon:
        logger.info('Running %d scan workers as threads inside a daemonic process', max_workers)
        return ThreadPoolExecutor(max_workers=max_workers)
    return ProcessPoolExecutor(max_workers=max_workers)


def scan_measures(params: ReservoirParams, a_B_grid: np.ndarray, grid: TimeGrid,
                  model: QubitModel = QubitModel.DOUBLE_WELL,
                  angular: AngularMode = AngularMode.AVERAGE,
                  max_workers: int = 1) -> Tuple[ScanPoint, ...]:
    """
    Modified measure and final Gamma for each a_B / a_Rb on the grid.

    With max_workers > 1 the cells run in worker processes (threads when
    already inside a daemonic worker); the result keeps grid order.
    """
    cells = [params.replace(a_B=float(ratio) * units.A_RB) for ratio in a_B_grid]
    for cell in cells:
        validate(cell)

    if max_workers > 1:
        with _executor(max_workers) as executor:
            points = tuple(executor.map(_measure_at, cells, repeat(grid), repeat(model), repeat(angular)))
    else:
        points = tuple(_measure_at(cell, grid, model, angular) for cell in cells)
    repeated = [p.a_B_over_aRb for p in points if not p.single_interval]
    if repeated:
        logger.warning(
            '%d cells with repeated backflow carry the trace-distance sum instead: a_B = %s a_Rb',
            len(repeated), ', '.join(f'{ratio:.4g}' for ratio in repeated),
        )
    logger.info(
        'Scanned %d scattering lengths in %dD (%s), %d non-Markovian',
        len(points), params.dimension, QubitModel(model).value, sum(p.non_markovian for p in points),
    )
    return points


def crossover_scan(dimension: int, a_B_grid: Optional[np.ndarray] = None, T: float = 0.0,
                   t_max: Optional[float] = None, n_t: int = DEFAULT_N_T,
                   model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL,
                   angular: Union[AngularMode, str] = AngularMode.AVERAGE,
                   params: Optional[ReservoirParams] = None,
                   max_workers: int = 1) -> CrossoverResult:
    """
    Locate the critical boson scattering length.

    Args:
        dimension: Condensate dimension (1, 2 or 3).
        a_B_grid: Increasing a_B / a_Rb values, at least 8.
        T: Temperature in kelvin.
        t_max: Time window in units of hbar/E_ref; DEFAULT_T_MAX when omitted.
        n_t: Number of time samples.
        model: Qubit model.
        angular: Direction treatment for the double well.
        params: Remaining reservoir parameters (defaults otherwise).
        max_workers: Worker processes over grid cells.

    Raises:
        NotBracketedError: the measure never switches between zero and positive.
    """
    model = QubitModel(model)
    angular = AngularMode(angular)
    t_max = default_t_max(dimension) if t_max is None else float(t_max)
    ratios = default_a_B_grid() if a_B_grid is None else np.asarray(a_B_grid, dtype=float)
    if ratios.size < MIN_GRID_POINTS:
        raise DomainError(f'A crossover scan needs at least {MIN_GRID_POINTS} a_B values, got {ratios.size}')
    if np.any(np.diff(ratios) <= 0.0) or ratios[0] <= 0.0:
        raise DomainError('a_B grid must be positive and strictly increasing')

    base = (params or ReservoirParams()).replace(dimension=int(dimension), T=float(T))
    grid = TimeGrid.uniform(t_max, n_t)
    points = scan_measures(base, ratios, grid, model, angular, max_workers)

    flags = [p.non_markovian for p in points]
    switch = next((i for i in range(len(flags) - 1) if flags[i] != flags[i + 1]), None)
    if switch is None:
        raise NotBracketedError(
            f'Measure does not switch between zero and positive on a_B in '
            f'[{ratios[0]:.4g}, {ratios[-1]:.4g}] a_Rb ({dimension}D, {model.value}, T={T:g} K)',
            low_measure=points[0].measure,
            high_measure=points[-1].measure,
        )

    def excess(ratio: float) -> float:
        cell = base.replace(a_B=ratio * units.A_RB)
        return _measure_at(cell, grid, model, angular).measure - MEASURE_THRESHOLD

    low, high = ratios[switch], ratios[switch + 1]
    critical = optimize.bisect(excess, low, high, xtol=BISECT_XTOL)
    logger.info('Critical a_B in %dD (%s, T=%g K): %.4g a_Rb', dimension, model.value, T, critical)
    return CrossoverResult(
        dimension=int(dimension),
        model=model,
        T=float(T),
        t_max=t_max,
        a_B_crit_over_aRb=float(critical),
        points=points,
    )
