# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing the command line interface of antiptsv.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
Each subcommand reads a JSON run configuration, runs one of the model
calculations and writes its tables to the output directory:

    antiptsv eigen          supermode gaps across the exceptional point
    antiptsv spectra        homodyne noise spectra per detuning
    antiptsv discord-sweep  discord, Duan value and EIT separation vs detuning
    antiptsv eit            coupled and uncoupled probe gain spectra
    antiptsv phase          probe gain against the channel-1 probe phase
    antiptsv micro          three-compartment reduction and its oracles

Exit codes: 0 success, 1 output error, 2 configuration error, 3 numerical
failure.
"""


import argparse
import logging
import sys

import numpy as np
import pandas as pd

from . import config as cfg
from . import (effective_model, eit_semiclassical, gaussian_info, io,
               langevin_spectra, microscopic_exchange)
from .errors import ConfigError, NumericError


logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _write(config, data, file_name, *, out=None, file_prefix=None):
    directory = out if out is not None else config.outputs.directory
    return io.write_table(data=data, write_dir=directory, file_name=file_name,
                          formats=config.outputs.formats,
                          file_prefix=file_prefix)


def _default_span(config):
    """Coupling rate in configuration units, used to size default grids."""
    return config.params.gamma_c if config.params.gamma_c > 0 else 1.0


def cmd_eigen(config, *, out=None, seed=None):
    """Write the supermode gap table (delta0, re_gap, im_gap)."""
    params = cfg.system_params(config)
    grid = cfg.sweep_grid(config, 'delta0', default=np.linspace(
        0, 3 * _default_span(config), 101))
    table = effective_model.eigengap_sweep(params, grid)
    return _write(config, table, 'eigen', out=out)


def cmd_spectra(config, *, out=None, seed=None):
    """Write noise spectra in dB and covariance matrices for each detuning.

    With a simulation section the time-domain estimate and its standard
    errors are written as well.
    """
    params = cfg.system_params(config)
    omega = cfg.spectrum_grid(config)
    grid = cfg.sweep_grid(config, 'delta0', default=[config.params.delta0])
    if config.simulation is not None:
        seed = cfg.require_seed(config, seed)
    paths = []
    for index, delta0 in enumerate(grid):
        point = params.replace(delta0=float(delta0))
        prefix = 'delta0_%03d_' % index
        spec = langevin_spectra.spectral_cm(point, omega)
        paths += _write(config, langevin_spectra.variance_traces(spec),
                        'spectra', out=out, file_prefix=prefix)
        paths += _write(config, spec.to_frame(), 'spectra_cm', out=out,
                        file_prefix=prefix)
        if config.simulation is not None:
            sim = cfg.simulation_settings(config)
            estimate = langevin_spectra.simulate_time_domain(
                point, seed=seed, n_traj=sim.n_traj, dt=sim.dt,
                t_total=sim.t_total, nperseg=sim.nperseg,
                batch_size=sim.batch_size, n_jobs=config.n_jobs)
            paths += _write(config, estimate.to_frame(), 'oracle_cm',
                            out=out, file_prefix=prefix)
    return paths


def cmd_discord_sweep(config, *, out=None, seed=None):
    """Write discord, Duan value, separation and symplectic data per
    detuning."""
    params = cfg.system_params(config)
    grid = cfg.sweep_grid(config, 'delta0', default=np.linspace(
        0, 3 * _default_span(config), 31))
    rows = []
    for delta0 in grid:
        cm = langevin_spectra.cm_at_analysis_frequency(
            params.replace(delta0=float(delta0)))
        result = gaussian_info.gaussian_discord(cm)
        rows.append({'discord': result.discord, 'duan': result.duan_value,
                     'nu_plus': result.nu_plus, 'nu_minus': result.nu_minus,
                     'mutual_information': result.mutual_information})
    separation = eit_semiclassical.separation_sweep(
        params, grid, probes=config.probes, n_jobs=config.n_jobs)
    table = pd.DataFrame(rows)
    table.insert(0, 'delta0', grid)
    table.insert(3, 'separation', separation['separation'].values)
    return _write(config, table, 'discord_sweep', out=out)


def cmd_eit(config, *, out=None, seed=None):
    """Write coupled and uncoupled gain traces and a peak summary."""
    params = cfg.system_params(config)
    span = (abs(config.params.delta0) +
            5 * effective_model.gamma12(config.params))
    grid = cfg.sweep_grid(config, 'delta_b',
                          default=np.linspace(-span, span, 401))
    coupled = eit_semiclassical.eit_spectrum(params, grid, config.probes)
    only_1 = eit_semiclassical.gain_trace(params, grid, config.probes.replace(
        channel_1_enabled=True, channel_2_enabled=False))
    only_2 = eit_semiclassical.gain_trace(params, grid, config.probes.replace(
        channel_1_enabled=False, channel_2_enabled=True))
    table = coupled.to_frame()
    table['uncoupled_gain_1'] = only_1['gain_1'].values
    table['uncoupled_gain_2'] = only_2['gain_2'].values

    peak_1, peak_2 = eit_semiclassical.uncoupled_peaks(params, grid)
    summary = pd.DataFrame([{
        'peak_1': coupled.peak_1, 'peak_2': coupled.peak_2,
        'separation': coupled.separation,
        'uncoupled_peak_1': peak_1, 'uncoupled_peak_2': peak_2,
        'max_gain_1': float(np.max(coupled.gain_1)),
        'max_gain_2': float(np.max(coupled.gain_2)),
        'max_uncoupled_gain': float(max(np.max(table['uncoupled_gain_1']),
                                        np.max(table['uncoupled_gain_2'])))}])
    return (_write(config, table, 'eit', out=out) +
            _write(config, summary, 'eit_peaks', out=out))


def cmd_phase(config, *, out=None, seed=None):
    """Write gains against the channel-1 probe phase and harmonic fits."""
    params = cfg.system_params(config)
    grid = cfg.sweep_grid(config, 'phi_1',
                          default=np.linspace(0, 2 * np.pi, 129))
    table = eit_semiclassical.phase_sweep(params, grid, config.probes)
    fits = []
    for channel in (1, 2):
        fit = eit_semiclassical.fit_single_harmonic(
            table['phi'].values, table['gain_%d' % channel].values)
        fits.append({'channel': channel, 'offset': fit.offset,
                     'amplitude': fit.amplitude, 'phase': fit.phase,
                     'explained_variance': fit.explained_variance})
    return (_write(config, table, 'phase', out=out) +
            _write(config, pd.DataFrame(fits), 'phase_fit', out=out))


def cmd_micro(config, *, out=None, seed=None):
    """Write the effective coupling summary, ODE trajectories, Monte Carlo
    trajectories and the narrow-feature comparison."""
    mp = cfg.micro_params(config)
    seed = cfg.require_seed(config, seed)
    sim = cfg.simulation_settings(config)
    params = cfg.system_params(config)

    coupling = microscopic_exchange.extract_effective_coupling(mp)
    gamma_c_fit, gamma12_fit, cost = (
        microscopic_exchange.fit_effective_coupling(mp))
    summary = pd.DataFrame([{
        'gamma_c_eff': coupling.gamma_c_eff,
        'gamma12_eff': coupling.gamma12_eff,
        'residual': coupling.residual,
        'gamma_c_adiabatic': microscopic_exchange.adiabatic_coupling(mp),
        'gamma_c_fit': gamma_c_fit, 'gamma12_fit': gamma12_fit,
        'fit_cost': cost}])

    mc = microscopic_exchange.monte_carlo_exchange(
        mp, seed=seed, n_atoms=sim.n_atoms, dt=sim.dt, t_total=sim.t_total,
        block_size=sim.block_size, n_jobs=config.n_jobs)
    times = cfg.sweep_grid(config, 'time', default=mc['time'].values *
                           config.unit_scale)
    ode = microscopic_exchange.compartment_trajectories(mp, times)
    narrow = microscopic_exchange.narrow_feature_comparison(
        mp, n_exc=params.n_exc)
    return (_write(config, summary, 'micro_coupling', out=out) +
            _write(config, ode, 'micro_ode', out=out) +
            _write(config, mc, 'micro_mc', out=out) +
            _write(config, narrow, 'micro_narrow', out=out))


COMMANDS = {'eigen': cmd_eigen, 'spectra': cmd_spectra,
            'discord-sweep': cmd_discord_sweep, 'eit': cmd_eit,
            'phase': cmd_phase, 'micro': cmd_micro}


def build_parser():
    """Argument parser with one subcommand per calculation."""
    parser = argparse.ArgumentParser(
        prog='antiptsv',
        description='Simulate dissipatively coupled spin waves near an '
                    'anti-PT exceptional point.')
    parser.add_argument('--log-level', default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='logging level (default INFO)')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, func in COMMANDS.items():
        sub = subparsers.add_parser(name, help=func.__doc__.splitlines()[0])
        sub.add_argument('--config', required=True,
                         help='JSON run configuration')
        sub.add_argument('--out', default=None,
                         help='output directory (overrides outputs.directory)')
        sub.add_argument('--seed', type=int, default=None,
                         help='seed for stochastic runs (overrides seed)')
    return parser


def main(argv=None):
    """Run the command line interface and return the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format=LOG_FORMAT)
    try:
        config = cfg.load_config(args.config)
        paths = COMMANDS[args.command](config, out=args.out, seed=args.seed)
    except ConfigError as err:
        logger.error('configuration error: %s', err)
        return 2
    except NumericError as err:
        logger.error('numerical failure: %s', err)
        return 3
    except ValueError as err:
        logger.error('invalid input: %s', err)
        return 2
    except OSError as err:
        logger.error('output error: %s', err)
        return 1
    for path in paths:
        logger.info('wrote %s', path)
    return 0


if __name__ == '__main__':
    sys.exit(main())
