"""
Adaptive quadrature on top of QUADPACK (scipy.integrate.quad).

`integrate` covers smooth and oscillatory integrands on finite intervals
(split into panels at the oscillation scale) and semi-infinite intervals
through the mapping w = a + scale*u/(1-u). `fourier_integral` handles long
cos/sin tails with QUADPACK's Fourier-weighted rules. `integrate_vec` evaluates
many integrals of a shared variable at once, e.g. one per time point.
"""
import logging
import math
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import integrate as sp_integrate

from apps.qdyn.exceptions import DomainError, QuadratureError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_LIMIT = 200
MAX_PANELS = 50000
FOURIER_CYCLES = 200

RealFunction = Callable[[float], float]


def _checked_quad(func: RealFunction, a: float, b: float, tol: float, limit: int,
                  **kwargs) -> tuple:
    """Run quad with full output and turn QUADPACK failure flags into errors."""
    try:
        result = sp_integrate.quad(
            func, a, b, epsabs=tol, epsrel=0.0, limit=limit, full_output=1, **kwargs
        )
    except ValueError as exc:
        raise QuadratureError(f'Quadrature on [{a}, {b}] failed: {exc}', math.nan, math.inf) from exc

    value, abserr = float(result[0]), float(result[1])
    if not math.isfinite(value):
        raise QuadratureError(f'Quadrature on [{a}, {b}] produced {value}', value, abserr)

    # quad appends a message to the output tuple only when QUADPACK flags a problem
    if len(result) > 3 and abserr > tol:
        message = str(result[3]).splitlines()[0]
        logger.debug('Quadrature on [%s, %s] flagged: %s', a, b, message)
        raise QuadratureError(
            f'Quadrature on [{a}, {b}] did not converge: {message} '
            f'(estimate {value:.12g}, error {abserr:.3e}, tol {tol:.1e})',
            value,
            abserr,
        )
    return value, abserr


def _panel_edges(a: float, b: float, period: Optional[float],
                 breakpoints: Optional[Iterable[float]]) -> np.ndarray:
    edges = [a, b]
    if period is not None:
        if period <= 0.0:
            raise DomainError(f'Oscillation period must be positive, got {period}')
        count = int(math.floor((b - a) / period))
        if count > MAX_PANELS:
            raise DomainError(
                f'{count} panels of width {period:.3e} exceed the limit of {MAX_PANELS}'
            )
        edges.extend(a + period * np.arange(1, count + 1))
    if breakpoints is not None:
        edges.extend(float(p) for p in breakpoints if a < p < b)
    return np.unique(np.asarray(edges, dtype=float))


def integrate(func: RealFunction, a: float, b: float, tol: float = DEFAULT_TOL, *,
              period: Optional[float] = None,
              breakpoints: Optional[Iterable[float]] = None,
              scale: float = 1.0,
              limit: int = DEFAULT_LIMIT) -> float:
    """
    Adaptive Gauss-Kronrod estimate of the integral of func over [a, b].

    Args:
        func: Real integrand, finite on [a, b] apart from integrable end-point
            singularities.
        a, b: Integration limits; b may be +inf.
        tol: Absolute error bound for the whole integral.
        period: Oscillation scale (pi/t for 1 - cos(w t) or sin(w t)); the
            interval is split into panels of this width.
        breakpoints: Extra panel edges, e.g. where a phase crosses a multiple of pi.
        scale: Mapping scale for semi-infinite intervals.
        limit: Maximum number of QUADPACK subdivisions per panel.

    Raises:
        QuadratureError: carrying the best estimate when the tolerance is not met.

    Examples:
        >>> integrate(lambda w: w, 0.0, 1.0)
        0.5
    """
    if math.isnan(a) or math.isnan(b):
        raise DomainError('Integration limits must not be NaN')
    if b < a:
        raise DomainError(f'Integration requires a <= b, got [{a}, {b}]')
    if a == b:
        return 0.0

    if math.isinf(b):
        if period is not None:
            raise DomainError('Oscillatory semi-infinite integrals go through fourier_integral')
        if scale <= 0.0:
            raise DomainError(f'Mapping scale must be positive, got {scale}')

        def mapped(u: float) -> float:
            if u >= 1.0:
                return 0.0
            return func(a + scale * u / (1.0 - u)) * scale / (1.0 - u) ** 2

        value, _ = _checked_quad(mapped, 0.0, 1.0, tol, limit)
        return value

    edges = _panel_edges(a, b, period, breakpoints)
    panel_tol = tol / max(len(edges) - 1, 1)
    total = 0.0
    total_err = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        try:
            value, abserr = _checked_quad(func, float(left), float(right), panel_tol, limit)
        except QuadratureError as exc:
            raise QuadratureError(str(exc), total + exc.estimate, total_err + exc.abserr) from exc
        total += value
        total_err += abserr
    return total


def fourier_integral(func: RealFunction, a: float, b: float, t: float, kind: str = 'cos',
                     tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT) -> float:
    """
    Integral of func(w)*cos(w t) or func(w)*sin(w t) over [a, b], b possibly +inf.

    Uses QUADPACK's QAWO rule on finite intervals and QAWF on [a, inf), so the
    cost does not grow with the number of oscillations.
    """
    if kind not in ('cos', 'sin'):
        raise DomainError(f"Fourier kernel must be 'cos' or 'sin', got {kind!r}")
    if b < a:
        raise DomainError(f'Integration requires a <= b, got [{a}, {b}]')
    if a == b:
        return 0.0
    if t == 0.0:
        return integrate(func, a, b, tol) if kind == 'cos' else 0.0

    sign = 1.0
    if t < 0.0:
        t = -t
        sign = -1.0 if kind == 'sin' else 1.0

    extra = {'limlst': FOURIER_CYCLES} if math.isinf(b) else {}
    value, _ = _checked_quad(func, a, b, tol, limit, weight=kind, wvar=t, **extra)
    return sign * value


def integrate_vec(func: Callable[[float], np.ndarray], a: float, b: float, tol: float = DEFAULT_TOL, *,
                  breakpoints: Optional[Iterable[float]] = None,
                  limit: int = DEFAULT_LIMIT) -> np.ndarray:
    """
    Integral of an array-valued func over a finite [a, b] with one shared
    adaptive subdivision (scipy.integrate.quad_vec).

    tol bounds the largest component error. Every breakpoint starts its own
    subinterval, so `limit` is raised to leave room for refinement past them.

    Raises:
        QuadratureError: when the subdivision limit is hit before tol is met.
    """
    if math.isnan(a) or math.isnan(b) or math.isinf(b):
        raise DomainError(f'Vector quadrature needs finite limits, got [{a}, {b}]')
    if b < a:
        raise DomainError(f'Integration requires a <= b, got [{a}, {b}]')
    if a == b:
        return np.zeros_like(np.asarray(func(a), dtype=float))
    edges = _panel_edges(a, b, None, breakpoints)[1:-1]
    limit = max(int(limit), 4 * (edges.size + 1))
    value, abserr, info = sp_integrate.quad_vec(
        func, a, b, epsabs=tol, epsrel=0.0, norm='max', limit=limit,
        points=edges if edges.size else None, full_output=True,
    )
    value = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(value)):
        raise QuadratureError(f'Vector quadrature on [{a}, {b}] produced non-finite values', value, abserr)
    if not info.success:
        raise QuadratureError(
            f'Vector quadrature on [{a}, {b}] did not converge: {info.message} '
            f'(error {abserr:.3e}, tol {tol:.1e})',
            value,
            abserr,
        )
    logger.debug('Vector quadrature on [%s, %s]: %d intervals, error %.2e', a, b, info.intervals.shape[0], abserr)
    return value
