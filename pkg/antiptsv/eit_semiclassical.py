# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing functions to compute probe gain spectra of the two
coupled EIT channels.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
Weak probes drive the ground-state coherences of the two channels through the
control fields. The steady-state coherences solve

    0 = i (delta_b I - H) sigma + s,    s_j = i kappa e_j exp(i phi_j),

with H the effective Hamiltonian (signed detuning) and kappa = Omega / g13.
Each probe leaves a thin medium as e_out = e_in (1 - alpha_bg) + i g_read
sigma and its gain is |e_out / e_in|**2 - 1. Positive gain means
amplification and negative gain absorption. The module provides gain traces
against the two-photon detuning, their peaks, the phase dependence of the
gain and the separation of the two EIT peaks as a function of the detuning
D0 across the exceptional point.
"""


import dataclasses
import logging

import joblib
import numpy as np
import pandas as pd
import scipy.optimize
import sklearn.linear_model
import sklearn.metrics

from . import tools
from .effective_model import build_hamiltonian, gamma12
from .errors import ConfigError, InternalConsistencyError


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ProbeConfig:
    """Probe amplitudes and phases and which channels are illuminated.

    A disabled channel has no probe drive and no coupling influence on the
    other channel.
    """

    e_in_1: complex = 1.0 + 0.0j
    e_in_2: complex = 1.0 + 0.0j
    phi_1: float = 0.0
    phi_2: float = 0.0
    channel_1_enabled: bool = True
    channel_2_enabled: bool = True

    def __post_init__(self):
        if not (self.channel_1_enabled or self.channel_2_enabled):
            raise ConfigError('at least one probe channel must be enabled')
        for name in ('e_in_1', 'e_in_2', 'phi_1', 'phi_2'):
            if not np.isfinite(getattr(self, name)):
                raise ConfigError('%s must be finite' % name)

    @property
    def enabled(self):
        return np.array([self.channel_1_enabled, self.channel_2_enabled])

    @property
    def amplitudes(self):
        return np.array([self.e_in_1, self.e_in_2], dtype=complex)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class ProbeGain:
    """Gain of the two probes at one detuning."""

    gain_1: float
    gain_2: float
    disabled_1: bool = False
    disabled_2: bool = False


@dataclasses.dataclass(frozen=True, eq=False)
class EitSpectrum:
    """Gain traces over a two-photon detuning grid and their peaks.

    peak_1, peak_2 and separation are NaN when a trace has no unique peak.
    """

    delta_b_grid: np.ndarray
    gain_1: np.ndarray
    gain_2: np.ndarray
    peak_1: float
    peak_2: float
    separation: float

    def to_frame(self):
        return pd.DataFrame({'delta_b': self.delta_b_grid,
                             'gain_1': self.gain_1, 'gain_2': self.gain_2})


@dataclasses.dataclass(frozen=True)
class HarmonicFit:
    """Single-harmonic model gain = offset + amplitude cos(phi + phase)."""

    offset: float
    amplitude: float
    phase: float
    explained_variance: float


def _probe_system(params, probes):
    """Hamiltonian and drive vector for the enabled channels."""
    hamiltonian = build_hamiltonian(params, signed=True)
    if not (probes.channel_1_enabled and probes.channel_2_enabled):
        # gamma12 keeps the exit rate; only the exchange between beams stops
        hamiltonian[0, 1] = hamiltonian[1, 0] = 0.0
    phases = np.exp(1j * np.array([probes.phi_1, probes.phi_2]))
    drive = 1j * params.kappa_drive * probes.amplitudes * phases
    drive = np.where(probes.enabled, drive, 0.0)
    return hamiltonian, drive


def _coherences(params, delta_b, probes):
    """Steady-state coherences for an array of detunings, shape (n, 2)."""
    delta_b = np.atleast_1d(np.asarray(delta_b, dtype=float))
    hamiltonian, drive = _probe_system(params, probes)
    system = delta_b[:, None, None] * np.eye(2) - hamiltonian
    det = system[:, 0, 0] * system[:, 1, 1] - system[:, 0, 1] * system[:, 1, 0]
    if np.any(np.abs(det) == 0):
        raise InternalConsistencyError('singular steady-state system')
    return 1j * np.linalg.solve(system, np.broadcast_to(
        drive, (delta_b.size, 2))[..., None])[..., 0]


def coherence_steady_state(params, delta_b, probes):
    """Steady-state ground-state coherences of the two channels.

    Args:
        params (SystemParams): model parameters.
        delta_b (float): two-photon detuning.
        probes (ProbeConfig): probe settings.

    Returns:
        (tuple): tuple containing:

        - sigma_1 (*complex*): coherence of channel 1.
        - sigma_2 (*complex*): coherence of channel 2.
    """
    sigma = _coherences(params, delta_b, probes)[0]
    return complex(sigma[0]), complex(sigma[1])


def _gains(params, delta_b, probes):
    """Gain arrays of shape (n, 2); disabled channels give bare
    absorption."""
    enabled = probes.enabled
    amplitudes = probes.amplitudes
    for j in range(2):
        if enabled[j] and amplitudes[j] == 0:
            raise ConfigError('probe amplitude of enabled channel %d is zero'
                              % (j + 1))
    sigma = _coherences(params, delta_b, probes)
    safe = np.where(enabled, amplitudes, 1.0)
    ratio = (1 - params.alpha_bg) + 1j * params.g_read * sigma / safe
    gains = np.abs(ratio)**2 - 1
    bare = -params.alpha_bg * (2 - params.alpha_bg)
    return np.where(enabled, gains, bare)


def probe_gain(params, delta_b, probes):
    """Probe gain |e_out / e_in|**2 - 1 of both channels at one detuning.

    Args:
        params (SystemParams): model parameters including alpha_bg and
            g_read.
        delta_b (float): two-photon detuning.
        probes (ProbeConfig): probe settings; enabled channels need a
            non-zero amplitude.

    Returns:
        gain (ProbeGain): gains and disabled-channel flags. A disabled channel
        reports the bare absorption -alpha_bg (2 - alpha_bg).
    """
    gains = _gains(params, delta_b, probes)[0]
    return ProbeGain(gain_1=float(gains[0]), gain_2=float(gains[1]),
                     disabled_1=not probes.channel_1_enabled,
                     disabled_2=not probes.channel_2_enabled)


def gain_trace(params, delta_b_grid, probes):
    """Gain of both probes over a detuning grid.

    Returns:
        trace (pandas.DataFrame): columns delta_b, gain_1 and gain_2.
    """
    grid = tools.check_grid(delta_b_grid, name='delta_b grid')
    gains = _gains(params, grid, probes)
    return pd.DataFrame({'delta_b': grid, 'gain_1': gains[:, 0],
                         'gain_2': gains[:, 1]})


def eit_spectrum(params, delta_b_grid, probes):
    """Gain traces with peak positions and their separation.

    Peaks are the grid argmax refined by a parabola through three points.

    Args:
        params (SystemParams): model parameters.
        delta_b_grid (array_like): ascending grid of at least 3 detunings.
        probes (ProbeConfig): probe settings.

    Returns:
        spectrum (EitSpectrum): traces, peaks and separation.
    """
    grid = tools.check_grid(delta_b_grid, name='delta_b grid', min_points=3)
    gains = _gains(params, grid, probes)
    peak_1 = tools.quadratic_peak(grid, gains[:, 0])[0]
    peak_2 = tools.quadratic_peak(grid, gains[:, 1])[0]
    separation = abs(peak_1 - peak_2)
    if np.isnan(separation):
        logger.debug('gain trace without a unique peak, separation undefined')
    return EitSpectrum(delta_b_grid=grid, gain_1=gains[:, 0],
                       gain_2=gains[:, 1], peak_1=peak_1, peak_2=peak_2,
                       separation=separation)


def uncoupled_peaks(params, delta_b_grid):
    """EIT centres of each channel measured with the other channel off.

    Returns:
        (tuple): tuple containing:

        - peak_1 (*float*): centre of channel 1 alone.
        - peak_2 (*float*): centre of channel 2 alone.
    """
    only_1 = ProbeConfig(channel_2_enabled=False)
    only_2 = ProbeConfig(channel_1_enabled=False)
    return (eit_spectrum(params, delta_b_grid, only_1).peak_1,
            eit_spectrum(params, delta_b_grid, only_2).peak_2)


def refine_peak(gain, *, x, y):
    """Refine the discrete maximum of a trace with a bounded scalar search.

    Args:
        gain (callable): function returning the trace value at a point.
        x (array_like): ascending sample positions.
        y (array_like): sampled trace values.

    Returns:
        (tuple): tuple containing:

        - x_peak (*float*): refined peak position (grid point at a
          boundary, NaN for a flat trace).
        - y_peak (*float*): value at x_peak.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x_peak, y_peak = tools.quadratic_peak(x, y)
    if np.isnan(x_peak):
        return x_peak, y_peak
    k = int(np.argmin(np.abs(x - x_peak)))
    if k == 0 or k == len(x) - 1:
        return float(x[k]), float(y[k])
    res = scipy.optimize.minimize_scalar(
        lambda value: -gain(value), bounds=(x[k - 1], x[k + 1]),
        method='bounded', options={'xatol': 1e-10})
    return float(res.x), float(-res.fun)


def _separation_point(params, delta0, delta_b_grid, probes):
    point = params.replace(delta0=delta0)
    spectrum = eit_spectrum(point, delta_b_grid, probes)
    peaks = []
    for j, trace in enumerate((spectrum.gain_1, spectrum.gain_2)):
        peak, _ = refine_peak(
            lambda value, j=j: _gains(point, value, probes)[0, j],
            x=delta_b_grid, y=trace)
        peaks.append(peak)
    return peaks[0], peaks[1]


def separation_sweep(params, delta0_grid, *, delta_b_grid=None, probes=None,
                     n_jobs=1):
    """EIT peak separation as a function of the detuning delta0.

    Args:
        params (SystemParams): model parameters; delta0 is replaced by each
            grid value.
        delta0_grid (array_like): ascending detunings.
        delta_b_grid (array_like): probe detuning grid used to locate the
            peaks. Defaults to 1601 points spanning the largest |delta0| plus
            four linewidths on either side.
        probes (ProbeConfig): probe settings. Defaults to equal unit probes.
        n_jobs (int): joblib workers over sweep points. Defaults to 1.

    Returns:
        table (pandas.DataFrame): columns delta0, separation, peak_1, peak_2.
    """
    grid = tools.check_grid(delta0_grid, name='delta0 grid')
    probes = ProbeConfig() if probes is None else probes
    if delta_b_grid is None:
        span = float(np.max(np.abs(grid))) + 4 * gamma12(params)
        delta_b_grid = np.linspace(-span, span, 1601)
    delta_b_grid = tools.check_grid(delta_b_grid, name='delta_b grid',
                                    min_points=3)
    logger.info('separation sweep over %d detunings', grid.size)
    peaks = joblib.Parallel(n_jobs=n_jobs)(
        joblib.delayed(_separation_point)(params, delta0, delta_b_grid,
                                          probes)
        for delta0 in grid)
    peaks = np.array(peaks, dtype=float)
    return pd.DataFrame({'delta0': grid,
                         'separation': np.abs(peaks[:, 0] - peaks[:, 1]),
                         'peak_1': peaks[:, 0], 'peak_2': peaks[:, 1]})


def bend_location(table):
    """Detuning of maximum curvature of a separation curve."""
    return tools.max_curvature_location(table['delta0'].values,
                                        table['separation'].values)


def phase_sweep(params, phi_grid, probes, *, delta_b=0.0):
    """Gain of both channels as the channel-1 probe phase is swept.

    Args:
        params (SystemParams): model parameters.
        phi_grid (array_like): ascending phases spanning at least 2 pi.
        probes (ProbeConfig): probe settings; phi_1 is replaced by each grid
            value.
        delta_b (float): two-photon detuning. Defaults to resonance.

    Returns:
        table (pandas.DataFrame): columns phi, gain_1 and gain_2.
    """
    grid = tools.check_grid(phi_grid, name='phi grid', min_points=2)
    if grid[-1] - grid[0] < 2 * np.pi - 1e-12:
        raise ValueError('phi grid must span at least 2 pi')
    gains = np.array([_gains(params, delta_b, probes.replace(phi_1=phi))[0]
                      for phi in grid])
    return pd.DataFrame({'phi': grid, 'gain_1': gains[:, 0],
                         'gain_2': gains[:, 1]})


def fit_single_harmonic(phi, gain):
    """Least-squares fit of gain = offset + amplitude cos(phi + phase).

    Args:
        phi (array_like): phases.
        gain (array_like): gains at those phases.

    Returns:
        fit (HarmonicFit): fitted parameters and the fraction of variance
        explained.
    """
    phi = np.asarray(phi, dtype=float)
    gain = np.asarray(gain, dtype=float)
    features = np.column_stack((np.cos(phi), np.sin(phi)))
    model = sklearn.linear_model.LinearRegression().fit(features, gain)
    a, b = model.coef_
    return HarmonicFit(offset=float(model.intercept_),
                       amplitude=float(np.hypot(a, b)),
                       phase=float(np.arctan2(-b, a)),
                       explained_variance=float(sklearn.metrics.r2_score(
                           gain, model.predict(features))))
