"""
Qubit states, 2x2 operators and the elementary operations on them.

Basis order is (|e>, |g>): rho[0, 0] is the excited-state population,
sigma_z|e> = +|e> and sigma_minus = |g><e|.
"""
import logging
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from apps.qdyn.exceptions import InvalidOperatorError, InvalidStateError

logger = logging.getLogger(__name__)

STATE_ATOL = 1e-12
KET_ATOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)

KET_E = np.array([1, 0], dtype=complex)
KET_G = np.array([0, 1], dtype=complex)


# =============================================================================
# OPERATORS
# =============================================================================

@dataclass(frozen=True, eq=False)
class HermitianOp2:
    """A 2x2 Hermitian operator (Hamiltonians, Hermitian jump operators)."""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise InvalidOperatorError(f'Expected a 2x2 operator, got shape {matrix.shape}')
        if not np.all(np.isfinite(matrix)):
            raise InvalidOperatorError('Operator has non-finite entries')
        if np.max(np.abs(matrix - matrix.conj().T)) > STATE_ATOL:
            raise InvalidOperatorError('Operator is not Hermitian within 1e-12')
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def from_pauli(cls, x: float = 0.0, y: float = 0.0, z: float = 0.0,
                   identity: float = 0.0) -> 'HermitianOp2':
        return cls(identity * IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)

    @classmethod
    def zero(cls) -> 'HermitianOp2':
        return cls(np.zeros((2, 2), dtype=complex))

    def pauli_components(self) -> Tuple[float, float, float, float]:
        """Return (b, a_x, a_y, a_z) such that H = b*I + a.sigma."""
        m = self.matrix
        b = 0.5 * (m[0, 0] + m[1, 1]).real
        a_x = m[0, 1].real
        a_y = -m[0, 1].imag
        a_z = 0.5 * (m[0, 0] - m[1, 1]).real
        return b, a_x, a_y, a_z


OperatorLike = Union[HermitianOp2, np.ndarray]


def as_hermitian(op: OperatorLike) -> HermitianOp2:
    if isinstance(op, HermitianOp2):
        return op
    return HermitianOp2(op)


# =============================================================================
# STATES
# =============================================================================

def _validate_density(rho: np.ndarray, atol: float) -> None:
    if rho.shape != (2, 2):
        raise InvalidStateError(f'Expected a 2x2 density matrix, got shape {rho.shape}')
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError('Density matrix has non-finite entries')
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise InvalidStateError('Density matrix is not Hermitian')
    trace = np.trace(rho)
    if abs(trace - 1.0) > atol:
        raise InvalidStateError(f'Density matrix trace is {trace.real:.15g}, expected 1')
    lowest = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lowest < -atol:
        raise InvalidStateError(f'Density matrix has negative eigenvalue {lowest:.3e}')


@dataclass(frozen=True, eq=False)
class QubitState:
    """
    Validated qubit density matrix.

    `atol` loosens the physicality checks for states produced by integrators
    (1e-9); states built by hand keep the strict default.
    """

    rho: np.ndarray
    atol: float = field(default=STATE_ATOL, repr=False)

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        _validate_density(rho, self.atol)
        rho.setflags(write=False)
        object.__setattr__(self, 'rho', rho)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> 'QubitState':
        if x * x + y * y + z * z > 1.0 + STATE_ATOL:
            raise InvalidStateError('Bloch vector lies outside the unit ball')
        return cls(0.5 * (IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z))

    @classmethod
    def from_ket(cls, ket) -> 'QubitState':
        psi = np.asarray(ket, dtype=complex).reshape(2)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > KET_ATOL:
            raise InvalidStateError(f'State vector has norm {norm:.15g}, expected 1')
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def excited(cls) -> 'QubitState':
        return cls.from_ket(KET_E)

    @classmethod
    def ground(cls) -> 'QubitState':
        return cls.from_ket(KET_G)

    @classmethod
    def plus(cls) -> 'QubitState':
        return cls.from_bloch(1.0, 0.0, 0.0)

    @classmethod
    def minus(cls) -> 'QubitState':
        return cls.from_bloch(-1.0, 0.0, 0.0)

    @classmethod
    def maximally_mixed(cls) -> 'QubitState':
        return cls(0.5 * IDENTITY)

    @property
    def bloch(self) -> Tuple[float, float, float]:
        rho = self.rho
        return (
            float(2.0 * rho[0, 1].real),
            float(-2.0 * rho[0, 1].imag),
            float((rho[0, 0] - rho[1, 1]).real),
        )

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    @property
    def excited_population(self) -> float:
        return float(self.rho[0, 0].real)

    @property
    def coherence(self) -> complex:
        return complex(self.rho[0, 1])


StateLike = Union[QubitState, np.ndarray]


def as_state(value: StateLike) -> QubitState:
    if isinstance(value, QubitState):
        return value
    return QubitState(value)


# =============================================================================
# OPERATIONS
# =============================================================================

def trace_distance(rho1: StateLike, rho2: StateLike) -> float:
    """
    Trace distance D = 1/2 sum |eig(rho1 - rho2)| between two qubit states.

    Uses the closed-form eigenvalues of the 2x2 Hermitian difference.

    Examples:
        >>> trace_distance(QubitState.plus(), QubitState.minus())
        1.0
    """
    delta = as_state(rho1).rho - as_state(rho2).rho
    half_trace = 0.5 * (delta[0, 0] + delta[1, 1]).real
    half_split = 0.5 * (delta[0, 0] - delta[1, 1]).real
    radius = np.hypot(half_split, abs(delta[0, 1]))
    distance = 0.5 * (abs(half_trace + radius) + abs(half_trace - radius))
    return float(min(max(distance, 0.0), 1.0))


def expm_2x2(hamiltonian: OperatorLike, t) -> np.ndarray:
    """
    Closed-form propagator exp(-i H t) for a 2x2 Hermitian H.

    With H = b*I + a.sigma the propagator is
    e^{-ibt} [cos(|a|t) I - i sin(|a|t)/|a| (a.sigma)].

    Args:
        hamiltonian: HermitianOp2 or 2x2 Hermitian array.
        t: Scalar time or array of times.

    Returns:
        A (2, 2) unitary for scalar t, or an array of shape t.shape + (2, 2).
    """
    op = as_hermitian(hamiltonian)
    b, a_x, a_y, a_z = op.pauli_components()
    norm = np.sqrt(a_x * a_x + a_y * a_y + a_z * a_z)

    times = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(times)):
        raise InvalidOperatorError('Propagator time must be finite')

    cos_term = np.asarray(np.cos(norm * times))[..., None, None]
    # sin(|a| t)/|a| written through sinc so that |a| = 0 needs no branch
    sin_term = np.asarray(times * np.sinc(norm * times / np.pi))[..., None, None]
    phase = np.asarray(np.exp(-1j * b * times))[..., None, None]
    a_sigma = a_x * SIGMA_X + a_y * SIGMA_Y + a_z * SIGMA_Z
    return phase * (cos_term * IDENTITY - 1j * sin_term * a_sigma)
