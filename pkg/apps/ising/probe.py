"""
The central qubit as a criticality probe: echo measure of the chain and
scans over chain length and renormalized field.
"""
import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional

import numpy as np

from apps.blp.measures import MeasureReport, echo_measure
from apps.ising.modes import IsingParams, default_t_cut, loschmidt_echo, recurrence_time
from apps.qdyn.exceptions import DomainError
from apps.qdyn.grids import TimeGrid

logger = logging.getLogger(__name__)

DEFAULT_STEP = 0.01


def probe_grid(t_cut: float, step: float = DEFAULT_STEP) -> TimeGrid:
    return TimeGrid.uniform(t_cut, max(int(round(t_cut / step)) + 1, 201))


def probe_measure(params: IsingParams, t_cut: Optional[float] = None,
                  grid: Optional[TimeGrid] = None) -> MeasureReport:
    """
    Echo measure of the probe qubit, truncated at t_cut.

    t_cut defaults to the earlier of the recurrence estimate and the
    coupling time. A cut past the recurrence estimate is allowed but the
    report then carries a warning.
    """
    t_cut = default_t_cut(params.N, params.delta, params.J) if t_cut is None else float(t_cut)
    if t_cut <= 0.0:
        raise DomainError(f't_cut must be positive, got {t_cut}')
    grid = probe_grid(t_cut) if grid is None else grid
    report = echo_measure(loschmidt_echo(params, grid), t_cut)

    t_rec = recurrence_time(params.N, params.J)
    if t_cut > t_rec:
        message = f't_cut={t_cut:g} exceeds the recurrence estimate {t_rec:g} for N={params.N}'
        logger.warning(message)
        report = dataclasses.replace(report, warnings=report.warnings + (message,))
    return report


@dataclass(frozen=True)
class ScanRow:
    N: int
    lambda_star: float
    delta: float
    t_cut: float
    measure: float

    def as_tuple(self) -> tuple:
        return self.N, self.lambda_star, self.delta, self.t_cut, self.measure


def criticality_scan(sizes: Iterable[int], lambda_stars: Iterable[float], delta: float,
                     t_cut: Optional[float] = None, step: float = DEFAULT_STEP,
                     max_workers: int = 1) -> List[ScanRow]:
    """
    Echo measure over chain lengths and renormalized fields.

    Args:
        sizes: Chain lengths N.
        lambda_stars: Renormalized fields lam* = lam + delta.
        delta: Probe coupling.
        t_cut: Common truncation time; per-N default when omitted.
        step: Time step of the echo grid.
        max_workers: Threads over scan cells.

    Returns:
        Rows in (N, lam*) order.
    """
    sizes, lambda_stars = list(sizes), [float(x) for x in lambda_stars]
    if not sizes or not lambda_stars:
        raise DomainError('Criticality scan needs at least one N and one lam*')
    cells = list(product(sizes, lambda_stars))
    params = [IsingParams.at_field(N, lam_star, delta) for N, lam_star in cells]

    def evaluate(index: int) -> ScanRow:
        N, lam_star = cells[index]
        cut = default_t_cut(N, delta, params[index].J) if t_cut is None else float(t_cut)
        report = probe_measure(params[index], cut, probe_grid(cut, step))
        return ScanRow(N, lam_star, float(delta), cut, report.value)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            rows = list(executor.map(evaluate, range(len(cells))))
    else:
        rows = [evaluate(index) for index in range(len(cells))]
    logger.info('Criticality scan: %d sizes x %d fields, delta=%g', len(sizes), len(lambda_stars), delta)
    return rows


@dataclass(frozen=True)
class CriticalWindow:
    """Fields around the smallest measure of one chain length."""
    N: int
    lower: float
    upper: float
    minimum: float

    @property
    def centre(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, lam_star: float) -> bool:
        return self.lower <= lam_star <= self.upper

    def as_dict(self) -> dict:
        return {
            'N': self.N,
            'lower': self.lower,
            'upper': self.upper,
            'centre': self.centre,
            'minimum': self.minimum,
        }


def critical_windows(rows: Iterable[ScanRow], atol: float = 1e-9) -> List[CriticalWindow]:
    """
    Per chain length, the longest contiguous run of fields whose measure
    stays within `atol` of the smallest one.

    Before the cut the echo decays monotonically on a finite band of fields
    around the critical point, so the minimum is a plateau rather than a
    single field.
    """
    by_size = {}
    for row in rows:
        by_size.setdefault(row.N, []).append(row)
    windows = []
    for N, cells in by_size.items():
        cells = sorted(cells, key=lambda row: row.lambda_star)
        measures = np.array([row.measure for row in cells])
        minimum = float(measures.min())
        flat = np.concatenate([[0], (measures <= minimum + atol).astype(int), [0]])
        edges = np.flatnonzero(np.diff(flat))
        starts, stops = edges[::2], edges[1::2] - 1
        widest = int(np.argmax(stops - starts))
        windows.append(CriticalWindow(N, cells[starts[widest]].lambda_star,
                                      cells[stops[widest]].lambda_star, minimum))
    return windows
