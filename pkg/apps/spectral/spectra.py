"""
Spectral densities J(w) of dephasing environments and the thermal weight
xi(w, T) = J(w) coth(w/2T) / w^2.

Two families are provided: the Ohmic family
J(w) = w^s w_c^(1-s) e^(-w/w_c) and tabulated spectra (for example the
effective spectra of BEC reservoirs). Engineered spectra elsewhere only need
to follow the SpectralDensity protocol.
"""
import enum
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol, Tuple, Union, runtime_checkable

import numpy as np

from apps.qdyn.exceptions import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

CSV_HEADER = 'omega,j'
CSV_FORMAT = '%.12g'


def _result(values: np.ndarray, like) -> ArrayLike:
    return float(values) if np.ndim(like) == 0 else values


@runtime_checkable
class SpectralDensity(Protocol):
    """Anything that can evaluate J(w) for w >= 0."""

    omega_max: float
    scale: float

    def j(self, omega: ArrayLike) -> ArrayLike:
        ...


# =============================================================================
# TEMPERATURE
# =============================================================================

class Regime(str, enum.Enum):
    ZERO = 'zero'
    HIGH = 'high'
    FINITE = 'finite'


@dataclass(frozen=True)
class Temperature:
    """
    Reservoir temperature in the energy units of the study (k_B = 1).

    The regime tag selects between closed-form rates: `zero` holds exactly
    when T = 0, `high` marks T far above the cutoff, `finite` is everything
    else and is only handled by quadrature.
    """

    T: float = 0.0
    regime: Optional[Regime] = None

    def __post_init__(self):
        if not math.isfinite(self.T) or self.T < 0.0:
            raise DomainError(f'Temperature must be finite and non-negative, got {self.T}')
        regime = self.regime
        if regime is None:
            regime = Regime.ZERO if self.T == 0.0 else Regime.FINITE
        regime = Regime(regime)
        if (regime is Regime.ZERO) != (self.T == 0.0):
            raise DomainError(f'Regime {regime.value!r} is inconsistent with T = {self.T}')
        object.__setattr__(self, 'regime', regime)

    @classmethod
    def zero(cls) -> 'Temperature':
        return cls(0.0)

    @classmethod
    def high(cls, T: float) -> 'Temperature':
        return cls(T, Regime.HIGH)

    @classmethod
    def finite(cls, T: float) -> 'Temperature':
        return cls(T, Regime.FINITE)


def thermal_factor(omega: ArrayLike, temperature: Temperature) -> ArrayLike:
    """coth(w / 2T), identically 1 at T = 0."""
    w = np.asarray(omega, dtype=float)
    if temperature.T == 0.0:
        return _result(np.ones_like(w), omega)
    with np.errstate(divide='ignore'):
        values = 1.0 / np.tanh(w / (2.0 * temperature.T))
    return _result(values, omega)


# =============================================================================
# SPECTRA
# =============================================================================

@dataclass(frozen=True)
class OhmicSpectrum:
    """Ohmic-family spectrum; s < 1 sub-Ohmic, s = 1 Ohmic, s > 1 super-Ohmic."""

    s: float
    omega_c: float = 1.0

    def __post_init__(self):
        if not (self.s > 0.0 and math.isfinite(self.s)):
            raise DomainError(f'Ohmicity s must be positive, got {self.s}')
        if not (self.omega_c > 0.0 and math.isfinite(self.omega_c)):
            raise DomainError(f'Cutoff omega_c must be positive, got {self.omega_c}')

    @property
    def omega_max(self) -> float:
        return math.inf

    @property
    def scale(self) -> float:
        return self.omega_c

    def j(self, omega: ArrayLike) -> ArrayLike:
        w = np.asarray(omega, dtype=float)
        if np.any(w < 0.0):
            raise DomainError('Spectral density is defined for omega >= 0')
        values = np.power(w, self.s) * self.omega_c ** (1.0 - self.s) * np.exp(-w / self.omega_c)
        return _result(values, omega)


@dataclass(frozen=True, eq=False)
class TabulatedSpectrum:
    """
    Sampled spectrum J(w_i) with a low-frequency window used for fitting.

    Between samples J is interpolated linearly, below the first sample it is
    joined linearly to J(0) = 0 and above the last sample it vanishes.
    """

    omega: np.ndarray
    values: np.ndarray
    low_freq_window: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float).reshape(-1)
        values = np.array(self.values, dtype=float).reshape(-1)
        if omega.size != values.size:
            raise DomainError(f'{omega.size} frequencies but {values.size} spectral samples')
        if omega.size < 2:
            raise DomainError('A tabulated spectrum needs at least two samples')
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(values))):
            raise DomainError('Tabulated spectrum has non-finite samples')
        if omega[0] < 0.0 or np.any(np.diff(omega) <= 0.0):
            raise DomainError('Frequencies must be non-negative and strictly increasing')
        if np.any(values < 0.0):
            raise DomainError('Spectral density samples must be non-negative')

        window = self.low_freq_window
        if window is None:
            window = (omega[-1] / 1000.0, omega[-1] / 50.0)
        lo, hi = float(window[0]), float(window[1])
        if not 0.0 < lo < hi:
            raise DomainError(f'Low-frequency window ({lo}, {hi}) is not an increasing positive pair')

        omega.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'omega', omega)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'low_freq_window', (lo, hi))

    @property
    def omega_max(self) -> float:
        return float(self.omega[-1])

    @property
    def scale(self) -> float:
        return float(self.omega[int(np.argmax(self.values))]) or self.omega_max

    def j(self, omega: ArrayLike) -> ArrayLike:
        w = np.asarray(omega, dtype=float)
        if np.any(w < 0.0):
            raise DomainError('Spectral density is defined for omega >= 0')
        xs, ys = self.omega, self.values
        if xs[0] > 0.0:
            xs = np.concatenate(([0.0], xs))
            ys = np.concatenate(([0.0], ys))
        return _result(np.interp(w, xs, ys, right=0.0), omega)

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, np.column_stack([self.omega, self.values]), delimiter=',',
                   header=CSV_HEADER, comments='', fmt=CSV_FORMAT)
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path],
                 low_freq_window: Optional[Tuple[float, float]] = None) -> 'TabulatedSpectrum':
        path = Path(path)
        with path.open() as handle:
            header = handle.readline().strip().replace(' ', '')
        if header != CSV_HEADER:
            raise DomainError(f'{path}: expected header {CSV_HEADER!r}, found {header!r}')
        data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
        if data.shape[1] != 2:
            raise DomainError(f'{path}: expected two columns, found {data.shape[1]}')
        return cls(data[:, 0], data[:, 1], low_freq_window)


def tabulate(spec: SpectralDensity, omega: np.ndarray,
             low_freq_window: Optional[Tuple[float, float]] = None) -> TabulatedSpectrum:
    """Sample any spectral density on the given frequencies."""
    omega = np.asarray(omega, dtype=float)
    return TabulatedSpectrum(omega, np.asarray(spec.j(omega), dtype=float), low_freq_window)


# =============================================================================
# OPERATIONS
# =============================================================================

def ohmic_j(spec: OhmicSpectrum, omega: ArrayLike) -> ArrayLike:
    """
    J(w) = w^s w_c^(1-s) e^(-w/w_c).

    Examples:
        >>> ohmic_j(OhmicSpectrum(s=1.0, omega_c=1.0), 1.0)  # e^-1
        0.36787944117144233
    """
    return spec.j(omega)


def xi(spec: SpectralDensity, temperature: Temperature, omega: ArrayLike) -> ArrayLike:
    """Thermal weight J(w) coth(w/2T) / w^2 for w > 0."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0):
        raise DomainError('xi is defined for omega > 0')
    values = np.asarray(spec.j(w)) * np.asarray(thermal_factor(w, temperature)) / (w * w)
    return _result(values, omega)
