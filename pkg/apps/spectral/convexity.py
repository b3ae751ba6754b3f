"""
Convexity of xi(w, T) = J(w) coth(w/2T)/w^2.

A convex xi guarantees a non-negative dephasing rate at all times, so the
dynamics is Markovian; for the Ohmic family the converse also holds. For
tabulated or finite-temperature spectra the verdict is numerical only.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from apps.qdyn.exceptions import DomainError
from apps.spectral.spectra import SpectralDensity, Temperature, xi

logger = logging.getLogger(__name__)

CONVEXITY_TOL = 1e-8
MIN_POINTS = 16
DEFAULT_POINTS = 256


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    violation_omega: Optional[float]
    max_curvature: float

    def __bool__(self) -> bool:
        return self.convex


def default_window(spec: SpectralDensity) -> Tuple[float, float]:
    """Three decades below and one above the spectrum's natural scale."""
    scale = spec.scale
    hi = 10.0 * scale
    if np.isfinite(spec.omega_max):
        hi = min(hi, spec.omega_max)
    return 1e-3 * scale, hi


def is_convex(spec: SpectralDensity, temperature: Temperature,
              window: Optional[Tuple[float, float]] = None,
              n: int = DEFAULT_POINTS,
              tol: float = CONVEXITY_TOL) -> ConvexityVerdict:
    """
    Second-difference convexity test of xi on a log-spaced grid.

    Curvatures below -tol * max|xi''| count as violations, so the verdict
    does not depend on the overall scale of xi.

    Returns:
        ConvexityVerdict with the first violating frequency, if any.
    """
    lo, hi = window if window is not None else default_window(spec)
    if not 0.0 < lo < hi:
        raise DomainError(f'Convexity window ({lo}, {hi}) must satisfy 0 < lo < hi')
    if n < MIN_POINTS:
        raise DomainError(f'Convexity grid needs at least {MIN_POINTS} points, got {n}')

    omega = np.geomspace(lo, hi, n)
    values = np.asarray(xi(spec, temperature, omega), dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError(f'xi is not finite on the window ({lo}, {hi})')

    h = np.diff(omega)
    slopes = np.diff(values) / h
    curvature = 2.0 * np.diff(slopes) / (h[1:] + h[:-1])

    peak = float(np.max(np.abs(curvature)))
    violations = np.flatnonzero(curvature < -tol * peak)
    if violations.size == 0:
        return ConvexityVerdict(True, None, peak)

    first = float(omega[violations[0] + 1])
    logger.debug('xi loses convexity at omega = %.6g', first)
    return ConvexityVerdict(False, first, peak)
