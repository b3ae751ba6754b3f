"""
Decoherence of impurity qubits in a condensate.

Two qubit models are covered: the double well, whose two branches sit a
distance L apart and only feel modes with k.L away from multiples of pi,
and the atomic quantum dot, an impurity that is either present or absent.
The continuum decoherence factor in reduced units (q = k sigma, energies
in E_ref, times in hbar/E_ref) reads

    Gamma(t) = int dq N_D q^(D-1) (eps/E) e^(-q^2/2) A(q L/sigma)
               sin^2(E t/2) / E^2 coth(E/2T)

with A the direction-averaged sin^2(k.L) for the double well and A = 1
for the quantum dot. Changing variables to w = E(q) turns it into the
standard dephasing integral over an effective spectral density, which is
what `BogoliubovSpectrum` evaluates.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import special

from apps.bec.reservoir import (
    ReservoirParams,
    coupling_and_density,
    impurity_coupling,
)
from apps.dephasing.rates import decoherence_factor_at
from apps.qdyn import units
from apps.qdyn.exceptions import DomainError
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.quadrature import integrate_vec
from apps.spectral.spectra import TabulatedSpectrum, Temperature

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# e^(-q^2/2) drops below 1e-14 of its peak here
GAUSSIAN_CUTOFF = math.sqrt(-2.0 * math.log(1e-14))
SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}
# Absolute tolerances per unit prefactor
GAMMA_TOL = 1e-11
SPECTRAL_TOL = 1e-9


class QubitModel(str, enum.Enum):
    DOUBLE_WELL = 'double-well'
    AQD = 'aqd'


class AngularMode(str, enum.Enum):
    AVERAGE = 'average'
    PARALLEL = 'parallel'
    NONE = 'none'


def angular_factor(dimension: int, x: ArrayLike, mode: Union[AngularMode, str] = AngularMode.AVERAGE) -> ArrayLike:
    """
    sin^2(k.L) averaged over the directions of k, with x = |k| L.

        1D: sin^2(x)    2D: (1 - J0(2x)) / 2    3D: (1 - sin(2x)/2x) / 2

    `parallel` keeps k along L in every dimension, `none` drops the factor.
    """
    mode = AngularMode(mode)
    x = np.asarray(x, dtype=float)
    if mode is AngularMode.NONE:
        return np.ones_like(x)
    if mode is AngularMode.PARALLEL or dimension == 1:
        return np.sin(x) ** 2
    if dimension == 2:
        return 0.5 * (1.0 - special.j0(2.0 * x))
    return 0.5 * (1.0 - np.sinc(2.0 * x / np.pi))


# =============================================================================
# REDUCED MODEL
# =============================================================================

@dataclass(frozen=True)
class ReducedModel:
    """
    Dimensionless description of one qubit model in one reservoir.

    e_sigma is hbar^2/(2 m_B sigma^2) and mu is n_D g_B, both in units of
    E_ref; prefactor is N_D = 8 g_AB^2 n_D S_D / ((2 pi sigma)^D E_ref^2),
    a quarter of it for the quantum dot.
    """

    dimension: int
    e_sigma: float
    mu: float
    prefactor: float
    length: float
    temperature: float
    angular: AngularMode

    @classmethod
    def from_params(cls, params: ReservoirParams, model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL,
                    angular: Union[AngularMode, str] = AngularMode.AVERAGE) -> 'ReducedModel':
        model = QubitModel(model)
        angular = AngularMode.NONE if model is QubitModel.AQD else AngularMode(angular)
        e_ref = params.reference_energy
        g_B, n_D = coupling_and_density(params)
        D = params.dimension
        g_AB = impurity_coupling(params)
        prefactor = 8.0 * g_AB ** 2 * n_D * SPHERE_AREA[D] / ((2.0 * math.pi * params.sigma) ** D * e_ref ** 2)
        if model is QubitModel.AQD:
            prefactor /= 4.0
        return cls(
            dimension=D,
            e_sigma=units.HBAR ** 2 / (2.0 * params.m_B * params.sigma ** 2) / e_ref,
            mu=n_D * g_B / e_ref,
            prefactor=prefactor,
            length=params.L / params.sigma,
            temperature=params.reduced_temperature,
            angular=angular,
        )

    def energy(self, q: ArrayLike) -> ArrayLike:
        free = self.e_sigma * np.asarray(q, dtype=float) ** 2
        return np.sqrt(free * (free + 2.0 * self.mu))

    def momentum(self, energy: ArrayLike) -> ArrayLike:
        """Inverse dispersion q(E) for E >= 0."""
        E = np.asarray(energy, dtype=float)
        free = E * E / (self.mu + np.sqrt(self.mu * self.mu + E * E))
        return np.sqrt(free / self.e_sigma)

    @property
    def omega_max(self) -> float:
        return float(self.energy(GAUSSIAN_CUTOFF))

    def weight(self, q: ArrayLike) -> ArrayLike:
        """N_D q^(D-1) (eps/E) e^(-q^2/2) A(q L/sigma), without the time dependence."""
        q = np.asarray(q, dtype=float)
        free = self.e_sigma * q * q
        energy = np.sqrt(free * (free + 2.0 * self.mu))
        with np.errstate(invalid='ignore', divide='ignore'):
            ratio = np.where(energy > 0.0, free / np.where(energy > 0.0, energy, 1.0), 0.0)
        geometric = angular_factor(self.dimension, q * self.length, self.angular)
        return self.prefactor * q ** (self.dimension - 1) * ratio * np.exp(-0.5 * q * q) * geometric

    def thermal(self, energy: ArrayLike) -> ArrayLike:
        E = np.asarray(energy, dtype=float)
        if self.temperature == 0.0:
            return np.ones_like(E)
        with np.errstate(divide='ignore'):
            return 1.0 / np.tanh(E / (2.0 * self.temperature))

    def low_frequency_window(self) -> Tuple[float, float]:
        """Frequencies of q in [0.01, 0.1] q_h, with q_h the healing wavenumber (capped at 1)."""
        q_heal = min(math.sqrt(self.mu / self.e_sigma), 1.0) if self.mu > 0.0 else 1.0
        return float(self.energy(0.01 * q_heal)), float(self.energy(0.1 * q_heal))


# =============================================================================
# DIRECT EVALUATION
# =============================================================================

def _direct_gammas(reduced: ReducedModel, times: np.ndarray, tol: float) -> np.ndarray:
    """Gamma at all `times` from one vector quadrature over q."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0.0):
        raise DomainError('The decoherence factor is defined for t >= 0')
    t_max = float(times.max()) if times.size else 0.0
    if t_max == 0.0 or reduced.prefactor == 0.0:
        return np.zeros(times.shape)

    def integrand(q: float) -> np.ndarray:
        if q == 0.0:
            return np.zeros(times.shape)
        energy = float(reduced.energy(q))
        # sin^2(E t/2)/E^2 through sinc so that E -> 0 stays finite
        oscillation = 0.25 * times * times * np.sinc(energy * times / (2.0 * math.pi)) ** 2
        return float(reduced.weight(q) * reduced.thermal(energy)) * oscillation

    # panel edges at the zeros of sin^2(E t_max/2)
    n_zeros = int(reduced.omega_max * t_max / (2.0 * math.pi))
    edges = reduced.momentum(2.0 * math.pi * np.arange(1, n_zeros + 1) / t_max)
    return integrate_vec(integrand, 0.0, GAUSSIAN_CUTOFF, tol, breakpoints=edges)


def _tolerance(reduced: ReducedModel, tol: Optional[float]) -> float:
    return GAMMA_TOL * max(reduced.prefactor, 1.0) if tol is None else tol


def _direct(params: ReservoirParams, t: ArrayLike, model: QubitModel, angular: AngularMode,
            tol: Optional[float]) -> ArrayLike:
    reduced = ReducedModel.from_params(params, model, angular)
    times = np.asarray(t, dtype=float)
    values = _direct_gammas(reduced, times.reshape(-1), _tolerance(reduced, tol))
    return float(values[0]) if np.ndim(t) == 0 else values.reshape(times.shape)


def gamma_dw(t: ArrayLike, params: ReservoirParams, angular: Union[AngularMode, str] = AngularMode.AVERAGE,
             tol: Optional[float] = None) -> ArrayLike:
    """
    Decoherence factor of the double-well qubit by direct quadrature over q.

    Args:
        t: Time(s) in units of hbar/E_ref.
        params: Reservoir parameters; params.T sets the thermal factor.
        angular: Direction treatment of sin^2(k.L).
        tol: Absolute quadrature tolerance.
    """
    return _direct(params, t, QubitModel.DOUBLE_WELL, AngularMode(angular), tol)


def gamma_aqd(t: ArrayLike, params: ReservoirParams, tol: Optional[float] = None) -> ArrayLike:
    """
    Decoherence factor of the atomic quantum dot by direct quadrature over q.

    The thermal factor coth(E/2T) is applied as for the double well.
    """
    return _direct(params, t, QubitModel.AQD, AngularMode.NONE, tol)


# =============================================================================
# EFFECTIVE SPECTRAL DENSITY
# =============================================================================

class BogoliubovSpectrum:
    """
    Effective spectral density J(w) of a condensate reservoir, so that

        Gamma(t) = int J(w) coth(w/2T) (1 - cos w t) / w^2 dw

    reproduces the direct q-space result. J does not depend on temperature.
    """

    def __init__(self, params: ReservoirParams, model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL,
                 angular: Union[AngularMode, str] = AngularMode.AVERAGE):
        self.params = params
        self.model = QubitModel(model)
        self.reduced = ReducedModel.from_params(params, self.model, angular)

    def __repr__(self) -> str:
        return (f'BogoliubovSpectrum(D={self.reduced.dimension}, model={self.model.value}, '
                f'a_B={self.params.a_B_over_aRb:.4g} a_Rb)')

    @property
    def omega_max(self) -> float:
        return self.reduced.omega_max

    @property
    def scale(self) -> float:
        return float(self.reduced.energy(1.0))

    @property
    def temperature(self) -> Temperature:
        return Temperature(self.reduced.temperature)

    def j(self, omega: ArrayLike) -> ArrayLike:
        w = np.asarray(omega, dtype=float)
        if np.any(w < 0.0):
            raise DomainError('Spectral density is defined for omega >= 0')
        reduced = self.reduced
        q = reduced.momentum(w)
        with np.errstate(invalid='ignore', divide='ignore'):
            # dq/dw from eps^2 + 2 mu eps = w^2
            dq_dw = w / (np.sqrt(reduced.mu ** 2 + w * w) * 2.0 * q * reduced.e_sigma)
            values = np.where(w > 0.0, 0.5 * reduced.weight(q) * dq_dw, 0.0)
        return float(values) if np.ndim(omega) == 0 else values


def effective_spectrum(params: ReservoirParams, omega: np.ndarray,
                       model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL,
                       angular: Union[AngularMode, str] = AngularMode.AVERAGE) -> TabulatedSpectrum:
    """
    Tabulate the effective spectral density on the given frequencies.

    The low-frequency fit window is placed in the phonon part of the
    dispersion.

    Raises:
        DomainError: a frequency outside (0, omega_max].
    """
    spectrum = BogoliubovSpectrum(params, model, angular)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0) or np.any(omega > spectrum.omega_max * (1.0 + 1e-12)):
        raise DomainError(f'Frequencies must lie in (0, {spectrum.omega_max:.6g}]')
    return TabulatedSpectrum(omega, spectrum.j(omega), spectrum.reduced.low_frequency_window())


def default_omega_grid(params: ReservoirParams, n: int = 600,
                       model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL) -> np.ndarray:
    """Log-spaced frequencies from deep in the phonon regime up to omega_max."""
    reduced = ReducedModel.from_params(params, model)
    low, _ = reduced.low_frequency_window()
    return np.geomspace(low / 10.0, reduced.omega_max, int(n))


def spectral_gamma(params: ReservoirParams, t: float,
                   model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL,
                   angular: Union[AngularMode, str] = AngularMode.AVERAGE,
                   tol: Optional[float] = None) -> float:
    """Gamma(t) through the effective spectral density."""
    spectrum = BogoliubovSpectrum(params, model, angular)
    tol = SPECTRAL_TOL * max(spectrum.reduced.prefactor, 1.0) if tol is None else tol
    return decoherence_factor_at(spectrum, spectrum.temperature, t, tol)


def decoherence_trajectory(params: ReservoirParams, grid: TimeGrid,
                           model: Union[QubitModel, str] = QubitModel.DOUBLE_WELL,
                           angular: Union[AngularMode, str] = AngularMode.AVERAGE,
                           tol: Optional[float] = None) -> Trajectory:
    """
    Gamma on a grid of reduced times.

    All grid points share one adaptive subdivision in q, so quadrature
    errors vary smoothly along the grid instead of adding sample-to-sample
    noise to Gamma(t).
    """
    reduced = ReducedModel.from_params(params, model, angular)
    values = _direct_gammas(reduced, grid.points, _tolerance(reduced, tol))
    logger.debug('Gamma trajectory in %dD (%s) on %d points', reduced.dimension, QubitModel(model).value, len(grid))
    return Trajectory(grid, values, SignalKind.GAMMA_CUMULATIVE, label=f'a_B={params.a_B_over_aRb:.4g} a_Rb')
