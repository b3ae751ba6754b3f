"""
Run configuration for the study commands.

A run file is plain text, one `key = value` per line, `#` starts a comment.
Values are cast with django-environ against a per-study schema, exactly as
process settings are cast from the environment.
"""
import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import environ
from django.conf import settings

logger = logging.getLogger(__name__)

REQUIRED = object()
COMMAND_LINE = '<command line>'


class ConfigError(ValueError):
    """Raised for malformed, unknown, missing or uncastable run parameters."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = f'{path}:{line}: ' if path and line else (f'{path}: ' if path else '')
        super().__init__(f'{location}{message}')


class Subcommand(str, enum.Enum):
    DEPHASING_SCAN = 'dephasing-scan'
    BEC_SCAN = 'bec-scan'
    ISING_SCAN = 'ising-scan'
    MCWF_DEMO = 'mcwf-demo'
    SPECTRUM_FIT = 'spectrum-fit'


COMMON_SCHEMA = {
    'seed': (int, 0),
    'threads': (int, 0),
    'out': (str, ''),
}

SCHEMAS = {
    Subcommand.DEPHASING_SCAN: {
        's_min': (float, 1.0),
        's_max': (float, 4.0),
        's_step': (float, 0.05),
        'T': ([float], [0.0]),
        'omega_c': (float, 1.0),
        't_max': (float, 200.0),
        'n_t': (int, 4001),
        'high_T_min': (float, 10.0),
    },
    Subcommand.BEC_SCAN: {
        'dimension': (int, REQUIRED),
        'a_B_min': (float, 0.01),
        'a_B_max': (float, 0.4),
        'a_B_n': (int, 16),
        'T': (float, 0.0),
        't_max': (float, 0.0),
        'n_t': (int, 400),
        'model': (str, 'double-well'),
        'angular': (str, 'average'),
        'n0': (float, 1e20),
        'a_AB_bohr': (float, 55.0),
        'sigma_nm': (float, 45.0),
        'L_nm': (float, 75.0),
        'a_perp_nm': (float, 200.0),
        'a_z_nm': (float, 200.0),
    },
    Subcommand.ISING_SCAN: {
        'N': ([int], [100]),
        'lambda_star_min': (float, 0.9),
        'lambda_star_max': (float, 1.1),
        'lambda_star_step': (float, 0.005),
        'delta': (float, 0.05),
        't_cut': (float, 0.0),
        'step': (float, 0.01),
        'write_echoes': (bool, False),
    },
    Subcommand.MCWF_DEMO: {
        'channel': (str, 'decay'),
        'gamma': (float, 1.0),
        'omega': (float, 0.0),
        'initial': (str, 'excited'),
        'n_traj': (int, 1000),
        'dt': (float, 0.01),
        't_max': (float, 5.0),
        'n_t': (int, 51),
    },
    Subcommand.SPECTRUM_FIT: {
        'source': (str, 'ohmic'),
        'path': (str, ''),
        's': (float, 2.5),
        'omega_c': (float, 1.0),
        'n_omega': (int, 600),
        'window_lo': (float, 0.0),
        'window_hi': (float, 0.0),
        'dimension': (int, 3),
        'a_B_over_aRb': (float, 0.1),
        'model': (str, 'double-well'),
        'angular': (str, 'average'),
    },
}


@dataclass(frozen=True)
class RunConfig:
    """
    Fully cast parameters of one study run.

    `raw` keeps the textual values that produced `parameters`, so a run can
    be shipped to a worker and rebuilt there.
    """

    subcommand: Subcommand
    parameters: Dict[str, object]
    output_dir: Path
    seed: int = 0
    threads: int = 1
    raw: Dict[str, str] = field(default_factory=dict, repr=False)

    def __getitem__(self, key: str):
        return self.parameters[key]

    @classmethod
    def from_mapping(cls, subcommand: Union[Subcommand, str], raw: Mapping[str, str],
                     output_dir: Optional[Union[str, Path]] = None, seed: Optional[int] = None,
                     threads: Optional[int] = None) -> 'RunConfig':
        subcommand = Subcommand(subcommand)
        entries = {key: (value, COMMAND_LINE, None) for key, value in raw.items()}
        return _build(subcommand, entries, output_dir, seed, threads)


def parse_lines(text: str, path: str) -> Dict[str, Tuple[str, str, int]]:
    """Map key -> (value, path, line) for every `key = value` line."""
    entries = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f'expected "key = value", found {line.strip()!r}', path, number)
        if key in entries:
            raise ConfigError(f'duplicate key {key!r} (first set on line {entries[key][2]})', path, number)
        entries[key] = (value, path, number)
    return entries


def parse_override(item: str) -> Tuple[str, str]:
    key, sep, value = item.partition('=')
    if not sep or not key.strip():
        raise ConfigError(f'--set expects key=value, got {item!r}', COMMAND_LINE)
    return key.strip(), value.strip()


def load_config(subcommand: Union[Subcommand, str], path: Optional[Union[str, Path]] = None,
                overrides: Iterable[str] = (), output_dir: Optional[Union[str, Path]] = None,
                seed: Optional[int] = None, threads: Optional[int] = None) -> RunConfig:
    """
    Read a run file, apply `--set` overrides and cast everything.

    Precedence: explicit arguments, then overrides, then the file, then the
    schema defaults.

    Raises:
        ConfigError: with the offending file and line where there is one.
    """
    subcommand = Subcommand(subcommand)
    entries = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f'cannot read run file: {exc.strerror}', str(path)) from exc
        entries = parse_lines(text, str(path))
    for item in overrides or ():
        key, value = parse_override(item)
        entries[key] = (value, COMMAND_LINE, None)
    return _build(subcommand, entries, output_dir, seed, threads)


def _build(subcommand: Subcommand, entries: Mapping[str, Tuple[str, str, Optional[int]]],
           output_dir, seed, threads) -> RunConfig:
    schema = {**COMMON_SCHEMA, **SCHEMAS[subcommand]}
    for key, (_, path, line) in entries.items():
        if key not in schema:
            raise ConfigError(f'unknown key {key!r} for {subcommand.value}', path, line)

    env = environ.Env(**{key: cast for key, (cast, _) in schema.items()})
    env.ENVIRON = {key: value for key, (value, _, _) in entries.items()}

    parameters = {}
    for key, (cast, default) in schema.items():
        if key not in entries:
            if default is REQUIRED:
                raise ConfigError(f'missing required key {key!r} for {subcommand.value}')
            parameters[key] = default
            continue
        value, path, line = entries[key]
        try:
            parameters[key] = env(key)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f'cannot read {key!r} from {value!r}: {exc}', path, line) from exc

    seed = parameters.pop('seed') if seed is None else int(seed)
    threads = parameters.pop('threads') if threads is None else int(threads)
    out = parameters.pop('out')
    parameters.pop('seed', None)
    parameters.pop('threads', None)
    if threads < 1:
        threads = int(settings.QPROBE_THREADS)
    output_dir = Path(output_dir or out or settings.QPROBE_OUTPUT_DIR)
    logger.debug('Loaded %s config with %d keys', subcommand.value, len(entries))
    return RunConfig(
        subcommand=subcommand,
        parameters=parameters,
        output_dir=output_dir,
        seed=seed,
        threads=max(threads, 1),
        raw={key: value for key, (value, _, _) in entries.items()},
    )
