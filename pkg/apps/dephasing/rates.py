"""
Decoherence factor and dephasing rate of the exactly solvable pure-dephasing
qubit.

Conventions (hbar = k_B = 1):

    Gamma(t) = int_0^inf J(w) coth(w/2T) (1 - cos w t) / w^2 dw
    gamma(t) = dGamma/dt = int_0^inf J(w) coth(w/2T) sin(w t) / w dw

The off-diagonal element of the qubit decays as e^{-Gamma(t)}. For the Ohmic
family at T = 0 and in the high-temperature limit gamma has closed forms in
terms of the Euler gamma function.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Union

import numpy as np
from scipy import special

from apps.qdyn.exceptions import DomainError, GammaPoleError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.quadrature import fourier_integral, integrate
from apps.spectral.spectra import Regime, SpectralDensity, Temperature, thermal_factor

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Absolute tolerances relative to the spectrum's frequency scale
RATE_TOL = 1e-10
FACTOR_TOL = 1e-11


def _default_tol(spec: SpectralDensity, temperature: Temperature, base: float) -> float:
    # thermal occupation scales the integrand by roughly 2T/w_c
    return base * spec.scale * max(1.0, 2.0 * temperature.T / spec.scale)


def gamma_analytic(s: float, omega_c: float, t: ArrayLike, regime: Union[Regime, str] = Regime.ZERO,
                   T: float = 0.0) -> ArrayLike:
    """
    Closed-form Ohmic dephasing rate.

    zero:  w_c [1 + (w_c t)^2]^(-s/2) Gamma_E(s) sin(s arctan(w_c t))
    high:  2T [1 + (w_c t)^2]^(-(s-1)/2) Gamma_E(s-1) sin((s-1) arctan(w_c t))

    Args:
        s: Ohmicity parameter (> 0).
        omega_c: Cutoff frequency.
        t: Time or array of times (>= 0).
        regime: 'zero' or 'high'; finite temperatures go through gamma_numeric.
        T: Temperature, required (> 0) for the high-temperature branch.

    Raises:
        GammaPoleError: high-temperature branch with s <= 1.
    """
    regime = Regime(regime)
    if s <= 0.0 or omega_c <= 0.0:
        raise DomainError(f'Need s > 0 and omega_c > 0, got s={s}, omega_c={omega_c}')
    times = np.asarray(t, dtype=float)
    if np.any(times < 0.0):
        raise DomainError('Rates are defined for t >= 0')

    x = omega_c * times
    theta = np.arctan(x)
    if regime is Regime.ZERO:
        values = omega_c * (1.0 + x * x) ** (-s / 2.0) * special.gamma(s) * np.sin(s * theta)
    elif regime is Regime.HIGH:
        if T <= 0.0:
            raise DomainError('The high-temperature rate needs T > 0')
        if s <= 1.0:
            raise GammaPoleError(f'High-temperature rate needs Gamma_E(s - 1) with s > 1, got s={s}')
        p = s - 1.0
        values = 2.0 * T * (1.0 + x * x) ** (-p / 2.0) * special.gamma(p) * np.sin(p * theta)
    else:
        raise DomainError('No closed-form rate at finite temperature, use gamma_numeric')
    return float(values) if np.ndim(t) == 0 else values


def _rate_at(spec: SpectralDensity, temperature: Temperature, t: float, tol: float) -> float:
    if t == 0.0:
        return 0.0

    def weight(w: float) -> float:
        return float(spec.j(w) * thermal_factor(w, temperature) / w)

    split = min(math.pi / t, spec.omega_max)
    low = integrate(lambda w: weight(w) * math.sin(w * t), 0.0, split, tol / 2.0)
    if split >= spec.omega_max:
        return low
    return low + fourier_integral(weight, split, spec.omega_max, t, 'sin', tol / 2.0)


def gamma_numeric(spec: SpectralDensity, temperature: Temperature, t: ArrayLike,
                  tol: float = None) -> ArrayLike:
    """
    Dephasing rate by quadrature, valid at any temperature.

    The integral is split at w = pi/t: the first half-period is integrated
    directly, the oscillatory tail with a Fourier-weighted rule.
    """
    tol = _default_tol(spec, temperature, RATE_TOL) if tol is None else tol
    times = np.asarray(t, dtype=float)
    if np.any(times < 0.0):
        raise DomainError('Rates are defined for t >= 0')
    values = np.array([_rate_at(spec, temperature, float(x), tol) for x in times.reshape(-1)])
    return float(values[0]) if np.ndim(t) == 0 else values.reshape(times.shape)


def _factor_at(spec: SpectralDensity, temperature: Temperature, t: float, tol: float) -> float:
    if t == 0.0:
        return 0.0

    def weight(w: float) -> float:
        return float(spec.j(w) * thermal_factor(w, temperature) / (w * w))

    split = min(math.pi / t, spec.omega_max)
    # 1 - cos(wt) written as 2 sin^2(wt/2) to keep precision at small w
    low = integrate(lambda w: 2.0 * weight(w) * math.sin(0.5 * w * t) ** 2, 0.0, split, tol / 3.0)
    if split >= spec.omega_max:
        return low
    flat = integrate(weight, split, spec.omega_max, tol / 3.0, scale=spec.scale)
    wave = fourier_integral(weight, split, spec.omega_max, t, 'cos', tol / 3.0)
    return low + flat - wave


def decoherence_factor_at(spec: SpectralDensity, temperature: Temperature, t: float,
                          tol: float = None) -> float:
    tol = _default_tol(spec, temperature, FACTOR_TOL) if tol is None else tol
    if t < 0.0:
        raise DomainError('The decoherence factor is defined for t >= 0')
    return max(_factor_at(spec, temperature, float(t), tol), 0.0)


def decoherence_factor(spec: SpectralDensity, temperature: Temperature, grid: TimeGrid,
                       tol: float = None, max_workers: int = 1) -> Trajectory:
    """
    Gamma(t) on a time grid, each point by its own quadrature.

    Args:
        spec: Spectral density of the environment.
        temperature: Reservoir temperature.
        grid: Sample times, starting at 0.
        tol: Absolute tolerance per point.
        max_workers: Threads used to evaluate grid points.

    Returns:
        Trajectory of kind Gamma.
    """
    def evaluate(t: float) -> float:
        return decoherence_factor_at(spec, temperature, t, tol)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            values = list(executor.map(evaluate, grid.points))
    else:
        values = [evaluate(t) for t in grid.points]

    logger.debug('Computed Gamma on %d points (T=%s)', len(grid), temperature.T)
    return Trajectory(grid, np.asarray(values), SignalKind.GAMMA_CUMULATIVE)


def rate_trajectory(spec: SpectralDensity, temperature: Temperature, grid: TimeGrid,
                    tol: float = None, max_workers: int = 1) -> Trajectory:
    def evaluate(t: float) -> float:
        return gamma_numeric(spec, temperature, t, tol)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            values = list(executor.map(evaluate, grid.points))
    else:
        values = [evaluate(t) for t in grid.points]
    return Trajectory(grid, np.asarray(values), SignalKind.RATE)
