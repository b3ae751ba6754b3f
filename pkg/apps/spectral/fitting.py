"""
Effective Ohmicity of engineered spectra: J(w) ~ w^s_eff at low frequency.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from apps.qdyn.exceptions import FitError
from apps.spectral.spectra import TabulatedSpectrum

logger = logging.getLogger(__name__)

MIN_FIT_SAMPLES = 8


@dataclass(frozen=True)
class OhmicityFit:
    s_eff: float
    stderr: float
    intercept: float
    window: Tuple[float, float]
    n_samples: int

    def as_dict(self) -> dict:
        return {
            's_eff': self.s_eff,
            'stderr': self.stderr,
            'intercept': self.intercept,
            'window': list(self.window),
            'n_samples': self.n_samples,
        }


def fit_effective_ohmicity(spec: TabulatedSpectrum,
                           window: Optional[Tuple[float, float]] = None) -> OhmicityFit:
    """
    Least-squares slope of log J against log w over the low-frequency window.

    Args:
        spec: Tabulated spectrum; its own low_freq_window is used by default.
        window: Optional (w_lo, w_hi) override.

    Raises:
        FitError: fewer than 8 samples in the window, or a sample with J <= 0.
    """
    lo, hi = window if window is not None else spec.low_freq_window
    mask = (spec.omega >= lo) & (spec.omega <= hi)
    omega = spec.omega[mask]
    values = spec.values[mask]

    if omega.size < MIN_FIT_SAMPLES:
        raise FitError(
            f'Fit window ({lo:.4g}, {hi:.4g}) holds {omega.size} samples, '
            f'at least {MIN_FIT_SAMPLES} are needed'
        )
    if np.any(values <= 0.0) or np.any(omega <= 0.0):
        raise FitError(f'Fit window ({lo:.4g}, {hi:.4g}) contains non-positive samples')

    result = stats.linregress(np.log(omega), np.log(values))
    logger.debug('s_eff = %.6f +/- %.2e over %d samples', result.slope, result.stderr, omega.size)
    return OhmicityFit(
        s_eff=float(result.slope),
        stderr=float(result.stderr),
        intercept=float(result.intercept),
        window=(float(lo), float(hi)),
        n_samples=int(omega.size),
    )
