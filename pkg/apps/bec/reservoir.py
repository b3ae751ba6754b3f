"""
Condensate reservoirs: laboratory parameters, dimension-reduced couplings
and the Bogoliubov dispersion.

Everything here is in SI units. The decoherence code works in reduced units
fixed by the reference energy E_ref = n0 g_B^3D(a_Rb) and the impurity width
sigma; `ReservoirParams` provides the conversion factors.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Mapping, Tuple, Union

import numpy as np

from apps.qdyn import units
from apps.qdyn.exceptions import DomainError, ValidationError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Weak-interaction bound sqrt(a_B^3 n0) and the confinement ratio a_B / a_z
DILUTENESS_MAX = 0.1
CONFINEMENT_RATIO = 0.1
# Largest boson scattering length per dimension, in units of a_Rb
MAX_SCATTERING_LENGTH = {3: 3.0, 2: 2.0, 1: 1.0}


def bare_coupling(scattering_length: float, mass: float) -> float:
    """Three-dimensional contact coupling 4 pi hbar^2 a / m."""
    return 4.0 * math.pi * units.HBAR ** 2 * scattering_length / mass


@dataclass(frozen=True)
class ReservoirParams:
    """
    Impurity qubit immersed in a homogeneous condensate.

    Defaults reproduce a 87Rb condensate probed by 23Na impurities in an
    optical lattice of wavelength 600 nm (well separation L = lambda/8).
    """

    m_A: float = units.MASS_NA23
    m_B: float = units.MASS_RB87
    n0: float = 1e20
    a_B: float = units.A_RB
    a_AB: float = 55 * units.BOHR_RADIUS
    sigma: float = 45 * units.NANOMETER
    L: float = 75 * units.NANOMETER
    dimension: int = 3
    a_z: float = 200 * units.NANOMETER
    a_perp: float = 200 * units.NANOMETER
    T: float = 0.0

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise DomainError(f'Condensate dimension must be 1, 2 or 3, got {self.dimension}')
        for name in ('m_A', 'm_B', 'n0', 'sigma', 'L', 'a_z', 'a_perp'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f'{name} must be positive and finite, got {value}')
        for name in ('a_B', 'a_AB'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise DomainError(f'{name} must be non-negative, got {value}')
        if not (math.isfinite(self.T) and self.T >= 0.0):
            raise DomainError(f'Temperature must be non-negative, got {self.T}')

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> 'ReservoirParams':
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise DomainError(f'Unknown reservoir parameters: {", ".join(unknown)}')
        return cls(**values)

    def replace(self, **changes) -> 'ReservoirParams':
        return dataclasses.replace(self, **changes)

    @property
    def reduced_mass(self) -> float:
        return self.m_A * self.m_B / (self.m_A + self.m_B)

    @property
    def reference_energy(self) -> float:
        """E_ref = n0 g_B^3D evaluated at the natural Rb scattering length."""
        return self.n0 * bare_coupling(units.A_RB, self.m_B)

    @property
    def time_unit(self) -> float:
        """hbar / E_ref in seconds."""
        return units.HBAR / self.reference_energy

    @property
    def reduced_temperature(self) -> float:
        return units.K_B * self.T / self.reference_energy

    @property
    def a_B_over_aRb(self) -> float:
        return self.a_B / units.A_RB


# =============================================================================
# COUPLINGS
# =============================================================================

def validate(params: ReservoirParams) -> None:
    """
    Check the weak-interaction and confinement bounds.

    Raises:
        ValidationError: naming the violated bound.
    """
    diluteness = math.sqrt(params.a_B ** 3 * params.n0)
    if diluteness >= DILUTENESS_MAX:
        raise ValidationError(
            f'sqrt(a_B^3 n0) = {diluteness:.3g} breaks the weak-interaction bound {DILUTENESS_MAX}'
        )
    limit = MAX_SCATTERING_LENGTH[params.dimension]
    if params.a_B_over_aRb > limit * (1.0 + 1e-9):
        raise ValidationError(
            f'a_B = {params.a_B_over_aRb:.3g} a_Rb exceeds the {params.dimension}D maximum of {limit:g} a_Rb'
        )
    if params.dimension == 2 and params.a_B >= CONFINEMENT_RATIO * params.a_z:
        raise ValidationError(f'a_B = {params.a_B:.3e} m is not much smaller than a_z = {params.a_z:.3e} m')
    if params.dimension == 1 and params.a_B >= CONFINEMENT_RATIO * params.a_perp:
        raise ValidationError(
            f'a_B = {params.a_B:.3e} m is not much smaller than a_perp = {params.a_perp:.3e} m'
        )


def _reduce(coupling_3d: float, params: ReservoirParams) -> float:
    if params.dimension == 3:
        return coupling_3d
    if params.dimension == 2:
        return coupling_3d / (math.sqrt(2.0 * math.pi) * params.a_z)
    return coupling_3d / (2.0 * math.pi * params.a_perp ** 2)


def density(params: ReservoirParams) -> float:
    """Condensate density in D dimensions."""
    if params.dimension == 3:
        return params.n0
    if params.dimension == 2:
        return math.sqrt(math.pi) * params.n0 * params.a_z
    return params.n0 * math.pi * params.a_perp ** 2


def coupling_and_density(params: ReservoirParams) -> Tuple[float, float]:
    """
    Boson-boson coupling g_B and density n_D in the condensate's dimension.

        3D: 4 pi hbar^2 a_B / m_B                 with n0
        2D: sqrt(8 pi) hbar^2 a_B / (m_B a_z)     with sqrt(pi) n0 a_z
        1D: 2 hbar^2 a_B / (m_B a_perp^2)         with n0 pi a_perp^2
    """
    validate(params)
    return _reduce(bare_coupling(params.a_B, params.m_B), params), density(params)


def impurity_coupling(params: ReservoirParams) -> float:
    """Impurity-boson coupling 2 pi hbar^2 a_AB / m_red reduced to D dimensions."""
    coupling_3d = 2.0 * math.pi * units.HBAR ** 2 * params.a_AB / params.reduced_mass
    return _reduce(coupling_3d, params)


def chemical_potential(params: ReservoirParams) -> float:
    g_B, n_D = coupling_and_density(params)
    return n_D * g_B


def sound_velocity(params: ReservoirParams) -> float:
    return math.sqrt(chemical_potential(params) / params.m_B)


# =============================================================================
# BOGOLIUBOV MODES
# =============================================================================

@dataclass(frozen=True)
class BogoliubovMode:
    """
    Bogoliubov excitation at wavenumber k (SI).

    uv_factor is (|u_k| - |v_k|)^2, which equals eps_k / E_k.
    """

    k: ArrayLike
    eps_k: ArrayLike
    E_k: ArrayLike
    uv_factor: ArrayLike


def bogoliubov(k: ArrayLike, params: ReservoirParams) -> BogoliubovMode:
    """
    E_k = sqrt(eps_k (eps_k + 2 n_D g_B)) with eps_k = hbar^2 k^2 / 2 m_B.

    Examples:
        >>> mode = bogoliubov(1e6, ReservoirParams(a_B=0.0))
        >>> mode.uv_factor
        1.0
    """
    wavenumber = np.asarray(k, dtype=float)
    if np.any(wavenumber < 0.0) or not np.all(np.isfinite(wavenumber)):
        raise DomainError('Wavenumbers must be finite and non-negative')
    mu = chemical_potential(params)
    eps = units.HBAR ** 2 * wavenumber ** 2 / (2.0 * params.m_B)
    energy = np.sqrt(eps * (eps + 2.0 * mu))
    # at k = 0 the phonon limit gives eps/E -> 0, the free gas keeps 1
    with np.errstate(invalid='ignore', divide='ignore'):
        uv = np.where(energy > 0.0, eps / np.where(energy > 0.0, energy, 1.0), 0.0 if mu > 0.0 else 1.0)

    if np.ndim(k) == 0:
        return BogoliubovMode(float(wavenumber), float(eps), float(energy), float(uv))
    return BogoliubovMode(wavenumber, eps, energy, uv)
