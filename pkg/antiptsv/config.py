# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing functions to read, validate and write run configurations.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
A run configuration is a JSON object with the sections

    params      SystemParams fields plus unit_scale
    micro       MicroParams fields (optional)
    sweep       {variable, from, to, points} (optional)
    spectrum    {omega_min, omega_max, points} (optional)
    probes      ProbeConfig fields; complex amplitudes as [re, im] or numbers
    simulation  {n_traj, dt, t_total, nperseg, batch_size, n_atoms,
                 block_size} (optional)
    seed        integer (optional)
    n_jobs      integer, default 1
    outputs     {directory, formats}

Unknown keys are rejected. Rates in params, micro, rate-valued sweeps and the
spectrum grid are given in units of 1 / unit_scale; simulation times are
divided by unit_scale so the same file describes the same physics at any
scale.
"""


import dataclasses
import json
import logging
import numbers

import numpy as np

from . import tools
from .effective_model import SystemParams
from .eit_semiclassical import ProbeConfig
from .errors import ConfigError
from .microscopic_exchange import MicroParams


logger = logging.getLogger(__name__)

SWEEP_VARIABLES = {'delta0': 'rate', 'delta_b': 'rate', 'phi_1': 'angle',
                   'time': 'time'}
OUTPUT_FORMATS = ('csv', 'json')


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """Linear sweep of one variable (values in configuration units)."""

    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError('sweep.variable must be one of %s, got %r' % (
                ', '.join(SWEEP_VARIABLES), self.variable))
        if self.points < 2:
            raise ConfigError('sweep.points must be at least 2')
        if not self.stop > self.start:
            raise ConfigError('sweep.to must exceed sweep.from')


@dataclasses.dataclass(frozen=True)
class SpectrumConfig:
    """Analysis frequency grid (configuration units)."""

    omega_min: float = -10.0
    omega_max: float = 10.0
    points: int = 201

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError('spectrum.points must be at least 2')
        if not self.omega_max > self.omega_min:
            raise ConfigError('spectrum.omega_max must exceed '
                              'spectrum.omega_min')


@dataclasses.dataclass(frozen=True)
class SimulationConfig:
    """Settings of the stochastic oracles (times in configuration units)."""

    n_traj: int = 256
    dt: float = 0.01
    t_total: float = 100.0
    nperseg: int = None
    batch_size: int = 32
    n_atoms: int = 10000
    block_size: int = 1000

    def __post_init__(self):
        for name in ('n_traj', 'batch_size', 'n_atoms', 'block_size'):
            if getattr(self, name) < 1:
                raise ConfigError('simulation.%s must be at least 1' % name)
        if not (self.dt > 0 and self.t_total > self.dt):
            raise ConfigError('simulation needs 0 < dt < t_total')
        if self.nperseg is not None and self.nperseg < 2:
            raise ConfigError('simulation.nperseg must be at least 2')


@dataclasses.dataclass(frozen=True)
class OutputConfig:
    """Output directory and file formats."""

    directory: str = 'output'
    formats: tuple = ('csv',)

    def __post_init__(self):
        if not self.formats:
            raise ConfigError('outputs.formats must not be empty')
        for fmt in self.formats:
            if fmt not in OUTPUT_FORMATS:
                raise ConfigError('unknown output format %r' % fmt)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """A complete, validated run configuration."""

    params: SystemParams = SystemParams()
    unit_scale: float = 1.0
    micro: MicroParams = None
    sweep: SweepConfig = None
    spectrum: SpectrumConfig = SpectrumConfig()
    probes: ProbeConfig = ProbeConfig()
    simulation: SimulationConfig = None
    seed: int = None
    n_jobs: int = 1
    outputs: OutputConfig = OutputConfig()

    def __post_init__(self):
        if not (self.unit_scale > 0 and np.isfinite(self.unit_scale)):
            raise ConfigError('params.unit_scale must be positive')
        if self.seed is not None and self.seed < 0:
            raise ConfigError('seed must be non-negative')
        if self.n_jobs == 0:
            raise ConfigError('n_jobs must not be 0')


def _check_keys(mapping, allowed, path):
    if not isinstance(mapping, dict):
        raise ConfigError('%s must be a JSON object' % path)
    for key in mapping:
        if key not in allowed:
            raise ConfigError('unknown configuration key %s.%s' % (path, key)
                              if path else 'unknown configuration key %s' %
                              key)


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError('%s must be a number, got %r' % (path, value))
    return float(value)


def _integer(value, path):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError('%s must be an integer, got %r' % (path, value))
    return int(value)


def _boolean(value, path):
    if not isinstance(value, bool):
        raise ConfigError('%s must be true or false, got %r' % (path, value))
    return value


def _complex(value, path):
    if isinstance(value, list):
        if len(value) != 2:
            raise ConfigError('%s must be [re, im]' % path)
        return complex(_number(value[0], path + '[0]'),
                       _number(value[1], path + '[1]'))
    return complex(_number(value, path))


def _field_names(cls):
    return [field.name for field in dataclasses.fields(cls)]


def _parse_section(mapping, cls, path, converters):
    _check_keys(mapping, _field_names(cls), path)
    values = {key: converters.get(key, _number)(value, '%s.%s' % (path, key))
              for key, value in mapping.items()}
    return cls(**values)


def parse_config(mapping):
    """Build a RunConfig from a decoded JSON object.

    Args:
        mapping (dict): configuration object.

    Returns:
        config (RunConfig): validated configuration.
    """
    top = ('params', 'micro', 'sweep', 'spectrum', 'probes', 'simulation',
           'seed', 'n_jobs', 'outputs')
    _check_keys(mapping, top, '')
    kwargs = {}

    params = mapping.get('params', {})
    _check_keys(params, _field_names(SystemParams) + ['unit_scale'], 'params')
    params = dict(params)
    if 'unit_scale' in params:
        kwargs['unit_scale'] = _number(params.pop('unit_scale'),
                                       'params.unit_scale')
    kwargs['params'] = _parse_section(params, SystemParams, 'params', {})

    if mapping.get('micro') is not None:
        kwargs['micro'] = _parse_section(mapping['micro'], MicroParams,
                                         'micro', {})
    if mapping.get('sweep') is not None:
        sweep = mapping['sweep']
        _check_keys(sweep, ('variable', 'from', 'to', 'points'), 'sweep')
        missing = {'variable', 'from', 'to', 'points'} - set(sweep)
        if missing:
            raise ConfigError('sweep is missing %s' % ', '.join(sorted(
                missing)))
        if not isinstance(sweep['variable'], str):
            raise ConfigError('sweep.variable must be a string')
        kwargs['sweep'] = SweepConfig(
            variable=sweep['variable'],
            start=_number(sweep['from'], 'sweep.from'),
            stop=_number(sweep['to'], 'sweep.to'),
            points=_integer(sweep['points'], 'sweep.points'))
    if mapping.get('spectrum') is not None:
        kwargs['spectrum'] = _parse_section(mapping['spectrum'],
                                            SpectrumConfig, 'spectrum',
                                            {'points': _integer})
    if mapping.get('probes') is not None:
        kwargs['probes'] = _parse_section(
            mapping['probes'], ProbeConfig, 'probes',
            {'e_in_1': _complex, 'e_in_2': _complex,
             'channel_1_enabled': _boolean, 'channel_2_enabled': _boolean})
    if mapping.get('simulation') is not None:
        integers = {name: _integer for name in ('n_traj', 'batch_size',
                                                'n_atoms', 'block_size')}
        integers['nperseg'] = (lambda value, path: None if value is None
                               else _integer(value, path))
        kwargs['simulation'] = _parse_section(mapping['simulation'],
                                              SimulationConfig, 'simulation',
                                              integers)
    if mapping.get('seed') is not None:
        kwargs['seed'] = _integer(mapping['seed'], 'seed')
    if 'n_jobs' in mapping:
        kwargs['n_jobs'] = _integer(mapping['n_jobs'], 'n_jobs')
    if mapping.get('outputs') is not None:
        outputs = mapping['outputs']
        _check_keys(outputs, ('directory', 'formats'), 'outputs')
        values = {}
        if 'directory' in outputs:
            if not isinstance(outputs['directory'], str):
                raise ConfigError('outputs.directory must be a string')
            values['directory'] = outputs['directory']
        if 'formats' in outputs:
            if not isinstance(outputs['formats'], list):
                raise ConfigError('outputs.formats must be a list')
            values['formats'] = tuple(outputs['formats'])
        kwargs['outputs'] = OutputConfig(**values)
    return RunConfig(**kwargs)


def load_config(path):
    """Read and validate a JSON configuration file."""
    try:
        with open(path) as fin:
            mapping = json.load(fin)
    except json.JSONDecodeError as err:
        raise ConfigError('cannot parse %s: %s' % (path, err)) from err
    except (OSError, UnicodeDecodeError) as err:
        raise ConfigError('cannot read configuration %s: %s' % (
            path, getattr(err, 'strerror', None) or err)) from err
    logger.debug('loaded configuration from %s', path)
    return parse_config(mapping)


def _complex_pair(value):
    return [value.real, value.imag]


def config_to_dict(config):
    """Serialise a RunConfig to a JSON-compatible dict accepted by
    parse_config."""
    params = dataclasses.asdict(config.params)
    params['unit_scale'] = config.unit_scale
    mapping = {'params': params}
    if config.micro is not None:
        mapping['micro'] = dataclasses.asdict(config.micro)
    if config.sweep is not None:
        mapping['sweep'] = {'variable': config.sweep.variable,
                            'from': config.sweep.start,
                            'to': config.sweep.stop,
                            'points': config.sweep.points}
    mapping['spectrum'] = dataclasses.asdict(config.spectrum)
    probes = dataclasses.asdict(config.probes)
    probes['e_in_1'] = _complex_pair(config.probes.e_in_1)
    probes['e_in_2'] = _complex_pair(config.probes.e_in_2)
    mapping['probes'] = probes
    if config.simulation is not None:
        mapping['simulation'] = dataclasses.asdict(config.simulation)
    if config.seed is not None:
        mapping['seed'] = config.seed
    mapping['n_jobs'] = config.n_jobs
    mapping['outputs'] = {'directory': config.outputs.directory,
                          'formats': list(config.outputs.formats)}
    return mapping


def dump_config(config, path):
    """Write a RunConfig as JSON."""
    with open(path, 'w', newline='\n') as fout:
        json.dump(config_to_dict(config), fout, indent=2)
        fout.write('\n')


def system_params(config):
    """SystemParams of a configuration with unit_scale applied."""
    return config.params.scaled(config.unit_scale)


def micro_params(config):
    """MicroParams of a configuration with unit_scale applied."""
    if config.micro is None:
        raise ConfigError('configuration has no micro section')
    return config.micro.scaled(config.unit_scale)


def simulation_settings(config):
    """Simulation section with times divided by unit_scale."""
    sim = config.simulation or SimulationConfig()
    return dataclasses.replace(sim, dt=sim.dt / config.unit_scale,
                               t_total=sim.t_total / config.unit_scale)


def sweep_grid(config, variable, *, default):
    """Scaled grid of the sweep variable, or the default grid.

    Args:
        config (RunConfig): configuration.
        variable (str): variable the calling command sweeps.
        default (array_like): grid in configuration units used when the
            configuration has no sweep section.

    Returns:
        grid (numpy.ndarray): grid in internal units.
    """
    sweep = config.sweep
    if sweep is None:
        grid = np.asarray(default, dtype=float)
    elif sweep.variable != variable:
        raise ConfigError('sweep variable %r does not apply here (expected '
                          '%r)' % (sweep.variable, variable))
    else:
        grid = tools.linear_grid(start=sweep.start, stop=sweep.stop,
                                 points=sweep.points)
    kind = SWEEP_VARIABLES[variable]
    if kind == 'rate':
        grid = grid * config.unit_scale
    elif kind == 'time':
        grid = grid / config.unit_scale
    return grid


def spectrum_grid(config):
    """Analysis frequency grid in internal units."""
    spec = config.spectrum
    return config.unit_scale * tools.linear_grid(
        start=spec.omega_min, stop=spec.omega_max, points=spec.points)


def require_seed(config, seed=None):
    """Seed from the command line or the configuration, else ConfigError."""
    seed = config.seed if seed is None else seed
    if seed is None:
        raise ConfigError('this run is stochastic and needs a seed (config '
                          'seed or --seed)')
    if seed < 0:
        raise ConfigError('seed must be non-negative')
    return int(seed)
