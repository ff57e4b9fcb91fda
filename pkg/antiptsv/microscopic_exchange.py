# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing functions for the three-compartment atomic exchange
model.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
Atoms move between two illuminated regions (beam 1 and beam 2) and the dark
remainder of the cell. They leave each beam at rate r_exit and leave the dark
region at rate r_return, landing in either beam with equal probability. An
atom carries its ground-state coherence with it; inside a beam the coherence
precesses at -/+ D0 and decays at the pumping rate plus any local dephasing,
and in the dark it decays at gamma_dark. Channel 2 is tracked through the
conjugate coherence, as in the two-mode Langevin model.

The module builds the linear generator of the compartment means, reduces it
to the effective two-mode model by eliminating the dark region, checks that
reduction against the full frequency response and against spectra, and
simulates individual atoms as an independent check of the compartment
equations.
"""


import dataclasses
import logging
import math
import typing

import joblib
import numpy as np
import pandas as pd
import scipy.linalg
import scipy.optimize

from . import tools
from .errors import ConfigError, NumericError, StabilityError
from .langevin_spectra import (NoiseSpectrum, narrow_feature,
                               normally_ordered_spectrum, susceptibility)


logger = logging.getLogger(__name__)

REGIONS = ('beam1', 'beam2', 'dark')

# Rows of the (X1, P1, X2, P2) quadratures on (c1, conj(c2), c_dark).
MICRO_ALPHA = np.array([[1, 0, 0], [-1j, 0, 0], [0, 1, 0], [0, 1j, 0]])
MICRO_BETA = np.array([[1, 0, 0], [1j, 0, 0], [0, 1, 0], [0, -1j, 0]])

RATE_FIELDS = ('r_exit', 'r_return', 'gamma_dark', 'pump_rate', 'delta0',
               'omega_larmor', 'gamma_local')


@dataclasses.dataclass(frozen=True)
class MicroParams:
    """Exchange, decay and pumping rates of the three-compartment model."""

    r_exit: float = 2.0
    r_return: float = 50.0
    gamma_dark: float = 1.0
    pump_rate: float = 0.3
    delta0: float = 0.0
    omega_larmor: float = 50.0
    gamma_local: float = 0.0

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool) or not isinstance(
                    value, (int, float, np.integer, np.floating)):
                raise ConfigError('%s must be a real number, got %r' % (
                    field.name, value))
            if not math.isfinite(value):
                raise ConfigError('%s must be finite' % field.name)
        for name in ('r_exit', 'r_return', 'gamma_dark', 'pump_rate',
                     'gamma_local'):
            if getattr(self, name) < 0:
                raise ConfigError('%s must be non-negative, got %r' % (
                    name, getattr(self, name)))
        if self.r_exit > 0 and self.r_return == 0:
            raise ConfigError('r_return must be positive when r_exit is')

    @property
    def beam_decay(self):
        """Local coherence decay inside a beam."""
        return self.pump_rate + self.gamma_local

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def scaled(self, factor):
        """Return a copy with every rate multiplied by factor."""
        if not factor > 0:
            raise ConfigError('scale factor must be positive, got %r' %
                              factor)
        return self.replace(**{name: getattr(self, name) * factor
                               for name in RATE_FIELDS})


@dataclasses.dataclass(frozen=True, eq=False)
class CompartmentState:
    """Atom fraction, coherence and orientation of each region.

    Coherences are the generator variables (c1, conj(c2), c_dark) and
    orientations are population imbalances weighted by the atom fraction.
    """

    weight: np.ndarray
    coherence: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        if np.any(np.abs(self.orientation) > self.weight + 1e-12):
            raise ConfigError('population imbalance outside [-1, 1]')
        if not np.all(np.isfinite(self.coherence)):
            raise ConfigError('coherences must be finite')

    @property
    def imbalance(self):
        with np.errstate(invalid='ignore', divide='ignore'):
            return np.where(self.weight > 0, self.orientation / self.weight,
                            0.0)


class EffectiveCoupling(typing.NamedTuple):
    """Two-mode rates obtained from the compartment model."""

    gamma_c_eff: float
    gamma12_eff: float
    residual: float


def exchange_matrix(mp):
    """Generator of atom exchange between (beam1, beam2, dark).

    Columns sum to zero, so exchange conserves the number of atoms.
    """
    half = 0.5 * mp.r_return
    return np.array([[-mp.r_exit, 0.0, half],
                     [0.0, -mp.r_exit, half],
                     [mp.r_exit, mp.r_exit, -mp.r_return]])


def build_compartment_generator(mp, *, sector='coherence'):
    """Linear generator of the compartment means.

    Args:
        mp (MicroParams): model parameters.
        sector (str): 'coherence' for the 3x3 complex generator of
            (c1, conj(c2), c_dark), or 'population' for the 6x6 real
            generator of (W1, W2, W_dark, O1, O2, O_dark) with W the atom
            fractions and O the orientations. Pumping drives the orientation
            towards +1 in beam 1 and -1 in beam 2; in the dark it relaxes at
            gamma_dark.

    Returns:
        generator (numpy.ndarray): the generator matrix.
    """
    exchange = exchange_matrix(mp)
    if sector == 'coherence':
        local = np.diag([-1j * mp.delta0 - mp.beam_decay,
                         1j * mp.delta0 - mp.beam_decay,
                         -mp.gamma_dark])
        return exchange + local
    if sector == 'population':
        rho = mp.pump_rate
        generator = np.zeros((6, 6))
        generator[:3, :3] = exchange
        generator[3:, 3:] = exchange + np.diag([-rho, -rho, -mp.gamma_dark])
        generator[3:, :3] = np.diag([rho, -rho, 0.0])
        return generator
    raise ValueError("sector must be 'coherence' or 'population', got %r" %
                     sector)


def extract_effective_coupling(mp):
    """Effective two-mode rates from adiabatic elimination of the dark
    region.

    The dark coherence follows the beams instantaneously,
    c_dark = r_exit (c1 + conj(c2)) / (gamma_dark + r_return), which gives
    gamma_c_eff = r_exit r_return / (2 (gamma_dark + r_return)) and
    gamma12_eff = beam_decay + r_exit - gamma_c_eff.

    Args:
        mp (MicroParams): model parameters.

    Returns:
        coupling (EffectiveCoupling):
            effective rates and the norm of the difference between the
            reduced generator and the two-mode drift they define.
    """
    generator = build_compartment_generator(mp)
    dark = generator[2, 2]
    if dark == 0:
        raise NumericError('dark region cannot be eliminated when gamma_dark '
                           '+ r_return = 0')
    reduced = (generator[:2, :2] -
               np.outer(generator[:2, 2], generator[2, :2]) / dark)
    gamma_c_eff = float(reduced[0, 1].real)
    gamma12_eff = float(-reduced[0, 0].real)
    drift = np.array([[-1j * mp.delta0 - gamma12_eff, gamma_c_eff],
                      [gamma_c_eff, 1j * mp.delta0 - gamma12_eff]])
    residual = float(np.linalg.norm(reduced - drift))
    logger.debug('effective coupling %g, decay %g (residual %g)',
                 gamma_c_eff, gamma12_eff, residual)
    return EffectiveCoupling(gamma_c_eff, gamma12_eff, residual)


def adiabatic_coupling(mp):
    """Closed-form r_exit r_return / (2 (gamma_dark + r_return))."""
    return mp.r_exit * mp.r_return / (2 * (mp.gamma_dark + mp.r_return))


def beam_response(mp, omega):
    """Beam block of the compartment response (-i w - G)^-1.

    Returns:
        response (numpy.ndarray): array of shape (len(omega), 2, 2).
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    return susceptibility(build_compartment_generator(mp), omega)[:, :2, :2]


def _two_mode_drift(gamma_c, gamma12, delta0):
    return np.array([[-1j * delta0 - gamma12, gamma_c],
                     [gamma_c, 1j * delta0 - gamma12]])


def fit_effective_coupling(mp, *, omega_grid=None):
    """Least-squares fit of the two-mode response to the compartment beam
    response.

    Args:
        mp (MicroParams): model parameters.
        omega_grid (array_like): fit frequencies. Defaults to 121 points over
            three effective linewidths on either side.

    Returns:
        (tuple): tuple containing:

        - gamma_c_fit (*float*): fitted coupling rate.
        - gamma12_fit (*float*): fitted decay rate.
        - cost (*float*): final least-squares cost.
    """
    start = extract_effective_coupling(mp)
    if omega_grid is None:
        half = 3 * max(start.gamma12_eff, abs(mp.delta0), 1e-12)
        omega_grid = np.linspace(-half, half, 121)
    omega = tools.check_grid(omega_grid, name='omega grid', min_points=2)
    target = beam_response(mp, omega)

    def residuals(x):
        model = susceptibility(_two_mode_drift(x[0], x[1], mp.delta0), omega)
        diff = (model - target).ravel()
        return np.concatenate((diff.real, diff.imag))

    res = scipy.optimize.least_squares(
        residuals, [start.gamma_c_eff, start.gamma12_eff], method='lm',
        xtol=1e-14, ftol=1e-14, gtol=1e-14)
    return float(res.x[0]), float(res.x[1]), float(res.cost)


def initial_state(mp):
    """Exchange-stationary atom fractions with unit coherence per beam atom
    and unpolarised atoms.

    Returns:
        state (CompartmentState): initial state.
    """
    total = mp.r_exit + mp.r_return
    if mp.r_exit == 0:
        weight = np.array([0.5, 0.5, 0.0])
    else:
        beam = mp.r_return / (2 * total)
        weight = np.array([beam, beam, mp.r_exit / total])
    coherence = np.array([weight[0], weight[1], 0.0], dtype=complex)
    return CompartmentState(weight=weight, coherence=coherence,
                            orientation=np.zeros(3))


def _trajectory_frame(times, weight, coherence, orientation):
    columns = {'time': times}
    for k, region in enumerate(REGIONS):
        columns['w_' + region] = weight[:, k]
    for k, region in enumerate(REGIONS):
        columns['re_c_' + region] = coherence[:, k].real
        columns['im_c_' + region] = coherence[:, k].imag
    for k, region in enumerate(REGIONS):
        columns['o_' + region] = orientation[:, k]
    return pd.DataFrame(columns)


def compartment_trajectories(mp, times, *, initial=None):
    """Exact solution of the compartment equations by matrix exponential.

    Args:
        mp (MicroParams): model parameters.
        times (array_like): ascending non-negative output times.
        initial (CompartmentState): state at t = 0. Defaults to
            initial_state(mp).

    Returns:
        trajectories (pandas.DataFrame):
            columns time, w_<region>, re_c_<region>, im_c_<region> and
            o_<region> for region in beam1, beam2, dark.
    """
    times = tools.check_grid(times, name='times')
    if times[0] < 0:
        raise ValueError('times must be non-negative')
    initial = initial_state(mp) if initial is None else initial
    coherence_gen = build_compartment_generator(mp)
    population_gen = build_compartment_generator(mp, sector='population')
    population0 = np.concatenate((initial.weight, initial.orientation))

    coherence = np.array([scipy.linalg.expm(coherence_gen * t) @
                          initial.coherence for t in times])
    population = np.array([scipy.linalg.expm(population_gen * t) @
                           population0 for t in times])
    return _trajectory_frame(times, population[:, :3], coherence,
                             population[:, 3:])


def _max_rate(mp):
    return max(mp.r_exit, mp.r_return, mp.beam_decay, mp.gamma_dark,
               abs(mp.delta0), mp.pump_rate)


def _simulate_block(*, mp, seed, block, n_atoms, times):
    """Per-region sums and sums of squares over one block of atoms.

    Each atom's sojourns are exponential; between hops its coherence and
    orientation evolve in closed form, so samples are exact at every output
    time.
    """
    rng = np.random.Generator(np.random.Philox(
        np.random.SeedSequence([seed, int(block)])))
    n_times = times.size
    t_total = times[-1]
    weights = initial_state(mp).weight
    local = np.array([-1j * mp.delta0 - mp.beam_decay,
                      1j * mp.delta0 - mp.beam_decay, -mp.gamma_dark])
    leave = np.array([mp.r_exit, mp.r_exit, mp.r_return])
    target = np.array([1.0, -1.0, 0.0])
    relax = np.array([mp.pump_rate, mp.pump_rate, mp.gamma_dark])

    region = rng.choice(3, size=n_atoms, p=weights)
    coherence = np.where(region < 2, 1.0 + 0.0j, 0.0 + 0.0j)
    orientation = np.zeros(n_atoms)
    clock = np.zeros(n_atoms)

    shape = 3 * n_times
    sums = {key: np.zeros(shape) for key in
            ('w', 'c_re', 'c_im', 'o', 'c_re2', 'c_im2', 'o2')}
    active = np.arange(n_atoms)
    while active.size:
        reg = region[active]
        rate = leave[reg]
        with np.errstate(divide='ignore'):
            sojourn = np.where(rate > 0,
                               rng.exponential(size=active.size) /
                               np.where(rate > 0, rate, 1.0), np.inf)
        t0 = clock[active]
        t1 = t0 + sojourn

        first = np.searchsorted(times, t0, side='left')
        last = np.searchsorted(times, t1, side='left')
        counts = last - first
        total = int(counts.sum())
        if total:
            owner = np.repeat(np.arange(active.size), counts)
            offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts,
                                                   counts)
            sample = first[owner] + offsets
            tau = times[sample] - t0[owner]
            atom_reg = reg[owner]
            c_val = coherence[active][owner] * np.exp(local[atom_reg] * tau)
            o_start = orientation[active][owner]
            o_val = (target[atom_reg] + (o_start - target[atom_reg]) *
                     np.exp(-relax[atom_reg] * tau))
            bins = atom_reg * n_times + sample
            sums['w'] += np.bincount(bins, minlength=shape)
            sums['c_re'] += np.bincount(bins, c_val.real, minlength=shape)
            sums['c_im'] += np.bincount(bins, c_val.imag, minlength=shape)
            sums['o'] += np.bincount(bins, o_val, minlength=shape)
            sums['c_re2'] += np.bincount(bins, c_val.real**2, minlength=shape)
            sums['c_im2'] += np.bincount(bins, c_val.imag**2, minlength=shape)
            sums['o2'] += np.bincount(bins, o_val**2, minlength=shape)

        hop = t1 <= t_total
        movers = active[hop]
        dwell = sojourn[hop]
        reg_m = reg[hop]
        coherence[movers] = coherence[movers] * np.exp(local[reg_m] * dwell)
        orientation[movers] = (target[reg_m] + (orientation[movers] -
                                                target[reg_m]) *
                               np.exp(-relax[reg_m] * dwell))
        clock[movers] = t1[hop]
        to_beam = rng.integers(0, 2, size=movers.size)
        region[movers] = np.where(reg_m < 2, 2, to_beam)
        active = movers
    return sums


def monte_carlo_exchange(mp, *, seed, n_atoms, dt, t_total, block_size=1000,
                         n_jobs=1):
    """Ensemble-averaged compartment trajectories from individual atoms.

    Atoms start in a region drawn from the stationary atom fractions, with
    unit coherence in the beams and none in the dark, and hop between regions
    as a telegraph process. A hop moves the coherence without rescaling it.
    Block b of atoms draws from a Philox stream keyed by (seed, b) and blocks
    are reduced in index order, so the result depends only on seed, n_atoms
    and block_size.

    Args:
        mp (MicroParams): model parameters.
        seed (int): non-negative base seed.
        n_atoms (int): number of atoms, at least 1.
        dt (float): sampling interval; dt times the largest rate must stay
            below 0.1.
        t_total (float): last sampling time.
        block_size (int): atoms per work unit. Defaults to 1000.
        n_jobs (int): joblib workers. Defaults to 1.

    Returns:
        trajectories (pandas.DataFrame):
            the columns of compartment_trajectories (ensemble means per atom)
            plus matching se_ columns with their standard errors.
    """
    if n_atoms < 1:
        raise ValueError('n_atoms must be at least 1, got %r' % n_atoms)
    if not dt > 0 or dt * _max_rate(mp) >= 0.1:
        raise StabilityError('sampling step dt=%g too large for the largest '
                             'rate %g' % (dt, _max_rate(mp)))
    n_times = int(round(t_total / dt)) + 1
    times = dt * np.arange(n_times)

    blocks = [min(block_size, n_atoms - start)
              for start in range(0, n_atoms, block_size)]
    logger.info('simulating %d atoms in %d blocks over %d samples', n_atoms,
                len(blocks), n_times)
    results = joblib.Parallel(n_jobs=n_jobs)(
        joblib.delayed(_simulate_block)(mp=mp, seed=seed, block=block,
                                        n_atoms=size, times=times)
        for block, size in enumerate(blocks))
    sums = {key: np.zeros(3 * n_times) for key in results[0]}
    for result in results:
        for key, value in result.items():
            sums[key] += value

    def mean_and_se(total, total_sq):
        mean = total / n_atoms
        if n_atoms < 2:
            return mean, np.full_like(mean, np.nan)
        var = np.clip(total_sq - n_atoms * mean**2, 0, None) / (n_atoms - 1)
        return mean, np.sqrt(var / n_atoms)

    def per_region(values):
        return values.reshape(3, n_times).T

    weight, weight_se = mean_and_se(sums['w'], sums['w'])
    c_re, c_re_se = mean_and_se(sums['c_re'], sums['c_re2'])
    c_im, c_im_se = mean_and_se(sums['c_im'], sums['c_im2'])
    orient, orient_se = mean_and_se(sums['o'], sums['o2'])

    frame = _trajectory_frame(times, per_region(weight),
                              per_region(c_re + 1j * c_im),
                              per_region(orient))
    errors = _trajectory_frame(times, per_region(weight_se),
                               per_region(c_re_se + 1j * c_im_se),
                               per_region(orient_se))
    for column in errors.columns[1:]:
        frame['se_' + column] = errors[column].values
    return frame


def micro_spectrum(mp, omega, *, n_exc=1.0, eta_read=1.0):
    """Quadrature spectra of the beam coherences of the compartment model.

    Pumping noise of occupancy n_exc enters each beam with density
    2 n_exc beam_decay; the dark region adds no noise.

    Returns:
        spectrum (NoiseSpectrum): covariance matrices without pedestal.
    """
    grid = tools.check_grid(omega, name='omega grid')
    diffusion = 2 * n_exc * np.diag([mp.beam_decay, mp.beam_decay, 0.0])
    atomic = normally_ordered_spectrum(
        drift=build_compartment_generator(mp), diffusion=diffusion,
        omega=grid, alpha=MICRO_ALPHA, beta=MICRO_BETA)
    return NoiseSpectrum(omega_grid=grid, cm=np.eye(4) + eta_read * atomic,
                         pedestal=np.zeros_like(grid))


def effective_spectrum(mp, omega, *, n_exc=1.0, eta_read=1.0):
    """Spectra of the reduced two-mode model with the same beam noise."""
    grid = tools.check_grid(omega, name='omega grid')
    coupling = extract_effective_coupling(mp)
    drift = _two_mode_drift(coupling.gamma_c_eff, coupling.gamma12_eff,
                            mp.delta0)
    diffusion = 2 * n_exc * mp.beam_decay * np.eye(2)
    atomic = normally_ordered_spectrum(drift=drift, diffusion=diffusion,
                                       omega=grid)
    return NoiseSpectrum(omega_grid=grid, cm=np.eye(4) + eta_read * atomic,
                         pedestal=np.zeros_like(grid))


def narrow_feature_comparison(mp, *, n_exc=1.0, omega_grid=None):
    """Narrow-feature centre and width of the compartment model against the
    reduced two-mode model.

    Args:
        mp (MicroParams): model parameters.
        n_exc (float): pumping noise occupancy. Defaults to 1.
        omega_grid (array_like): analysis frequencies. Defaults to 2001
            points over ten effective linewidths either side of the largest
            detuning.

    Returns:
        table (pandas.DataFrame):
            one row per model ('micro', 'effective') with columns model,
            center, height and width.
    """
    if omega_grid is None:
        coupling = extract_effective_coupling(mp)
        half = abs(mp.delta0) + 10 * coupling.gamma12_eff
        omega_grid = np.linspace(-half, half, 2001)
    rows = []
    for name, spectrum in (
            ('micro', micro_spectrum(mp, omega_grid, n_exc=n_exc)),
            ('effective', effective_spectrum(mp, omega_grid, n_exc=n_exc))):
        feature = narrow_feature(spectrum)
        rows.append({'model': name, 'center': feature.center,
                     'height': feature.height, 'width': feature.width})
    return pd.DataFrame(rows, columns=['model', 'center', 'height', 'width'])
