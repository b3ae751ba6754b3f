"""
Study runners behind the management commands and the Celery task.

Every runner validates its whole configuration before computing, reduces
its results in memory and writes each output file exactly once.
"""
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List

import numpy as np
from scipy import integrate

from apps.bec import crossover
from apps.bec.decoherence import AngularMode, QubitModel, default_omega_grid, effective_spectrum
from apps.bec.reservoir import ReservoirParams, validate
from apps.blp.measures import blp_dephasing
from apps.dephasing.rates import gamma_analytic, rate_trajectory
from apps.ising.modes import IsingParams, loschmidt_echo, write_echo_csv
from apps.ising.probe import critical_windows, criticality_scan, probe_grid
from apps.mcwf.lindblad import JumpChannel, lindblad_integrate, write_lindblad_csv
from apps.mcwf.trajectories import EnsembleConfig, ensemble_average
from apps.qdyn import export, units
from apps.qdyn.grids import SignalKind, TimeGrid, Trajectory
from apps.qdyn.states import KET_E, SIGMA_MINUS, SIGMA_Z
from apps.spectral.convexity import is_convex
from apps.spectral.fitting import fit_effective_ohmicity
from apps.spectral.spectra import OhmicSpectrum, Regime, TabulatedSpectrum, Temperature, tabulate
from apps.studies.config import ConfigError, RunConfig, Subcommand

logger = logging.getLogger(__name__)

# Synthetic Ohmic tables are fitted deep below the cutoff
OHMIC_TABLE_DECADES = (-5.0, 1.0)
OHMIC_FIT_WINDOW = (1e-4, 1e-2)


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _inclusive_range(start: float, stop: float, step: float, name: str) -> np.ndarray:
    _check(step > 0.0, f'{name}_step must be positive, got {step}')
    _check(stop >= start, f'{name} grid is empty: {name}_max={stop} < {name}_min={start}')
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


# =============================================================================
# DEPHASING THRESHOLDS
# =============================================================================

def _temperature(T: float, omega_c: float, high_T_min: float) -> Temperature:
    if T == 0.0:
        return Temperature.zero()
    if T >= high_T_min * omega_c:
        return Temperature.high(T)
    return Temperature.finite(T)


def _rates(s: float, omega_c: float, temperature: Temperature, grid: TimeGrid, threads: int) -> np.ndarray:
    if temperature.regime is Regime.ZERO:
        return gamma_analytic(s, omega_c, grid.points)
    if temperature.regime is Regime.HIGH and s > 1.0:
        return gamma_analytic(s, omega_c, grid.points, Regime.HIGH, temperature.T)
    if temperature.regime is Regime.HIGH:
        logger.warning('No closed-form high-temperature rate for s=%g <= 1, integrating numerically', s)
    traj = rate_trajectory(OhmicSpectrum(s, omega_c), temperature, grid, max_workers=threads)
    return np.asarray(traj.values, dtype=float)


def run_dephasing_scan(config: RunConfig) -> List[Path]:
    """Minimum rate, trace-distance measure and xi convexity over (s, T)."""
    p = config.parameters
    s_grid = _inclusive_range(p['s_min'], p['s_max'], p['s_step'], 's')
    _check(s_grid[0] > 0.0, f's must be positive, got s_min={p["s_min"]}')
    _check(bool(p['T']), 'T list is empty')
    _check(all(T >= 0.0 for T in p['T']), 'temperatures must be non-negative')
    _check(p['omega_c'] > 0.0, 'omega_c must be positive')
    _check(p['n_t'] >= 3, 'n_t must be at least 3')
    grid = TimeGrid.uniform(p['t_max'], p['n_t'])

    rows = []
    for T in p['T']:
        temperature = _temperature(T, p['omega_c'], p['high_T_min'])
        for s in s_grid:
            rates = _rates(float(s), p['omega_c'], temperature, grid, config.threads)
            Gamma = integrate.cumulative_trapezoid(rates, grid.points, initial=0.0)
            report = blp_dephasing(Trajectory(grid, Gamma, SignalKind.GAMMA_CUMULATIVE))
            convex = is_convex(OhmicSpectrum(float(s), p['omega_c']), temperature)
            rows.append((s, T, float(np.min(rates[1:])), report.value, float(bool(convex))))
        logger.info('Dephasing scan at T=%g (%s): %d values of s', T, temperature.regime.value, len(s_grid))
    return [export.write_csv(config.output_dir / 'dephasing_scan.csv',
                             ('s', 'T', 'min_gamma', 'blp', 'convex'), rows)]


# =============================================================================
# BEC CROSSOVER
# =============================================================================

def _reservoir(p: Dict[str, object], **changes) -> ReservoirParams:
    values = dict(
        n0=p['n0'],
        a_AB=p['a_AB_bohr'] * units.BOHR_RADIUS,
        sigma=p['sigma_nm'] * units.NANOMETER,
        L=p['L_nm'] * units.NANOMETER,
        a_perp=p['a_perp_nm'] * units.NANOMETER,
        a_z=p['a_z_nm'] * units.NANOMETER,
        dimension=p['dimension'],
    )
    values.update(changes)
    return ReservoirParams(**values)


def run_bec_scan(config: RunConfig) -> List[Path]:
    """Modified measure against a_B and the critical scattering length."""
    p = config.parameters
    _check(p['dimension'] in (1, 2, 3), f'dimension must be 1, 2 or 3, got {p["dimension"]}')
    _check(0.0 < p['a_B_min'] < p['a_B_max'], 'need 0 < a_B_min < a_B_max')
    _check(p['a_B_n'] >= crossover.MIN_GRID_POINTS, f'a_B_n must be at least {crossover.MIN_GRID_POINTS}')
    _check(p['t_max'] >= 0.0, 't_max must be >= 0 (0 selects the per-dimension window)')
    model = QubitModel(p['model'])
    angular = AngularMode(p['angular'])
    base = _reservoir(p, T=p['T'])
    ratios = np.linspace(p['a_B_min'], p['a_B_max'], p['a_B_n'])
    for ratio in (ratios[0], ratios[-1]):
        validate(base.replace(a_B=float(ratio) * units.A_RB))

    result = crossover.crossover_scan(
        p['dimension'], ratios, T=p['T'], t_max=p['t_max'] or None, n_t=p['n_t'],
        model=model, angular=angular, params=base, max_workers=config.threads,
    )
    out = config.output_dir
    scan = export.write_csv(out / f'bec_scan_{result.dimension}d.csv',
                            ('a_B_over_aRb', 'measure', 'Gamma_inf', 'method'), result.rows())
    summary = export.write_json(out / 'bec_crossover.json', result.as_dict())
    return [scan, summary]


# =============================================================================
# ISING CRITICALITY
# =============================================================================

def run_ising_scan(config: RunConfig) -> List[Path]:
    """Echo measure of the probe over chain lengths and renormalized fields."""
    p = config.parameters
    _check(bool(p['N']), 'N list is empty')
    fields = _inclusive_range(p['lambda_star_min'], p['lambda_star_max'], p['lambda_star_step'], 'lambda_star')
    _check(p['step'] > 0.0, 'step must be positive')
    _check(p['t_cut'] >= 0.0, 't_cut must be >= 0 (0 selects the per-N default)')
    for N in p['N']:
        IsingParams.at_field(N, fields[0], p['delta'])

    t_cut = p['t_cut'] or None
    rows = criticality_scan(p['N'], fields, p['delta'], t_cut=t_cut, step=p['step'], max_workers=config.threads)
    out = config.output_dir
    paths = [export.write_csv(out / 'ising_scan.csv', ('N', 'lambda_star', 'delta', 't_cut', 'measure'),
                              [row.as_tuple() for row in rows])]
    windows = critical_windows(rows)
    paths.append(export.write_json(out / 'ising_critical.json', {
        'delta': p['delta'],
        'windows': [window.as_dict() for window in windows],
    }))
    for window in windows:
        logger.info('N=%d: smallest measure %.3g on lam* in [%g, %g]', window.N, window.minimum, window.lower, window.upper)
    if p['write_echoes']:
        for row in rows:
            params = IsingParams.at_field(row.N, row.lambda_star, row.delta)
            traj = loschmidt_echo(params, probe_grid(row.t_cut, p['step']))
            paths.append(write_echo_csv(traj, out / f'ising_echo_N{row.N}_lam{row.lambda_star:.4f}.csv'))
    return paths


# =============================================================================
# QUANTUM JUMPS
# =============================================================================

def run_mcwf_demo(config: RunConfig) -> List[Path]:
    """Jump-trajectory ensemble next to the deterministic master equation."""
    p = config.parameters
    _check(p['channel'] in ('decay', 'dephasing'), f'channel must be decay or dephasing, got {p["channel"]!r}')
    _check(p['initial'] in ('excited', 'plus'), f'initial must be excited or plus, got {p["initial"]!r}')
    _check(p['gamma'] >= 0.0, 'gamma must be non-negative')
    _check(p['n_t'] >= 2, 'n_t must be at least 2')
    if p['channel'] == 'decay':
        channels = [JumpChannel(SIGMA_MINUS, p['gamma'], label='decay')]
    else:
        channels = [JumpChannel(SIGMA_Z, p['gamma'] / 2.0, label='dephasing')]
    phi0 = KET_E if p['initial'] == 'excited' else np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    H = 0.5 * p['omega'] * SIGMA_Z
    grid = TimeGrid.uniform(p['t_max'], p['n_t'])
    ensemble = EnsembleConfig(n_traj=p['n_traj'], dt=p['dt'], seed=config.seed, max_workers=config.threads)

    result = ensemble_average(ensemble, H, channels, phi0, grid)
    substeps = max(1, int(math.ceil(grid.step / p['dt'] - 1e-9)))
    exact = lindblad_integrate(H, channels, np.outer(phi0, phi0.conj()), grid, substeps=substeps)
    out = config.output_dir
    return [
        result.write_csv(out / 'mcwf_ensemble.csv'),
        result.write_jumps_csv(out / 'mcwf_jumps.csv'),
        write_lindblad_csv(grid, exact, out / 'mcwf_lindblad.csv'),
    ]


# =============================================================================
# SPECTRUM FIT
# =============================================================================

def _window(p: Dict[str, object]):
    if p['window_lo'] or p['window_hi']:
        _check(0.0 < p['window_lo'] < p['window_hi'], 'need 0 < window_lo < window_hi')
        return p['window_lo'], p['window_hi']
    return None


def run_spectrum_fit(config: RunConfig) -> List[Path]:
    """Effective Ohmicity of a synthetic, BEC-derived or tabulated spectrum."""
    p = config.parameters
    source = p['source']
    _check(source in ('ohmic', 'bec', 'file'), f'source must be ohmic, bec or file, got {source!r}')
    window = _window(p)
    out = config.output_dir
    paths = []

    if source == 'file':
        _check(bool(p['path']), 'source = file needs a path')
        try:
            spectrum = TabulatedSpectrum.from_csv(p['path'], window)
        except OSError as exc:
            raise ConfigError(f'cannot read spectrum: {exc.strerror}', p['path']) from exc
    elif source == 'ohmic':
        _check(p['n_omega'] >= 16, 'n_omega must be at least 16')
        omega_c = p['omega_c']
        omega = omega_c * np.logspace(*OHMIC_TABLE_DECADES, p['n_omega'])
        default = (OHMIC_FIT_WINDOW[0] * omega_c, OHMIC_FIT_WINDOW[1] * omega_c)
        spectrum = tabulate(OhmicSpectrum(p['s'], omega_c), omega, window or default)
    else:
        params = _reservoir(
            {**p, 'n0': 1e20, 'a_AB_bohr': 55.0, 'sigma_nm': 45.0, 'L_nm': 75.0,
             'a_perp_nm': 200.0, 'a_z_nm': 200.0},
            a_B=p['a_B_over_aRb'] * units.A_RB,
        )
        validate(params)
        model = QubitModel(p['model'])
        spectrum = effective_spectrum(params, default_omega_grid(params, p['n_omega'], model),
                                      model, AngularMode(p['angular']))
        if window:
            spectrum = TabulatedSpectrum(spectrum.omega, spectrum.values, window)
    if source != 'file':
        paths.append(spectrum.to_csv(out / 'spectrum.csv'))

    fit = fit_effective_ohmicity(spectrum)
    payload = {'source': source, **fit.as_dict()}
    if source == 'ohmic':
        payload['s'] = p['s']
    paths.append(export.write_json(out / 'spectrum_fit.json', payload))
    logger.info('Effective Ohmicity (%s): %.4f +/- %.1e', source, fit.s_eff, fit.stderr)
    return paths


RUNNERS: Dict[Subcommand, Callable[[RunConfig], List[Path]]] = {
    Subcommand.DEPHASING_SCAN: run_dephasing_scan,
    Subcommand.BEC_SCAN: run_bec_scan,
    Subcommand.ISING_SCAN: run_ising_scan,
    Subcommand.MCWF_DEMO: run_mcwf_demo,
    Subcommand.SPECTRUM_FIT: run_spectrum_fit,
}


def run(config: RunConfig) -> List[Path]:
    logger.info('Running %s into %s (seed=%d, threads=%d)', config.subcommand.value,
                config.output_dir, config.seed, config.threads)
    return RUNNERS[config.subcommand](config)
