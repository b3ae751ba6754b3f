"""
SI constants used at the boundary between laboratory parameters and the
natural units (hbar = k_B = 1) the algorithms work in.
"""
import scipy.constants as const

HBAR = const.hbar
K_B = const.k
BOHR_RADIUS = const.physical_constants['Bohr radius'][0]
ATOMIC_MASS = const.physical_constants['atomic mass constant'][0]

MASS_RB87 = 86.909180527 * ATOMIC_MASS
MASS_NA23 = 22.9897692820 * ATOMIC_MASS

# Natural scattering length of 87Rb
A_RB = 99 * BOHR_RADIUS

NANOKELVIN = 1e-9
NANOMETER = 1e-9
