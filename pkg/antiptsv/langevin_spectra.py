# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing functions to compute homodyne noise spectra.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
The two spin waves are described by the mode vector v = (b1, b2^dagger) in the
frame rotating at the Larmor frequency. Its linear quantum Langevin equation

    dv/dt = m v + F

has the drift m = [[-i D0 - g12, Gc], [Gc, i D0 - g12]] and Langevin forces
whose correlations follow from the damping matrix K = [[g12, -Gc], [-Gc, g12]]
and an excess occupancy n_exc. This module computes the stationary quadrature
spectral covariance matrices of the two optical channels, ordered
(X1, P1, X2, P2) in shot-noise units, the dB traces plotted from them and an
independent time-domain estimate obtained from an ensemble of Euler-Maruyama
trajectories.
"""


import dataclasses
import logging

import joblib
import numpy as np
import pandas as pd
import scipy.linalg
import scipy.signal

from . import tools
from .effective_model import gamma12
from .errors import InternalConsistencyError, StabilityError


logger = logging.getLogger(__name__)

# Rows map (v, conj(v)) onto the quadratures X1, P1, X2, P2 through
# y = alpha . v + beta . conj(v); channel 2 enters through b2 = conj(v2).
QUADRATURE_ALPHA = np.array([[1, 0], [-1j, 0], [0, 1], [0, 1j]])
QUADRATURE_BETA = np.array([[1, 0], [1j, 0], [0, 1], [0, -1j]])

CM_LABELS = ('x1', 'p1', 'x2', 'p2')


@dataclasses.dataclass(frozen=True, eq=False)
class DriftMatrix:
    """Generator of the mode vector (b1, b2^dagger) in the rotating frame."""

    m: np.ndarray

    @property
    def eigenvalues(self):
        return np.linalg.eigvals(self.m)


@dataclasses.dataclass(frozen=True, eq=False)
class NoiseModel:
    """Langevin force correlation densities.

    Attributes:
        d_out (numpy.ndarray): density of <F F^dagger>.
        d_in (numpy.ndarray): density of <F^dagger F>.
    """

    d_out: np.ndarray
    d_in: np.ndarray

    def __post_init__(self):
        for name in ('d_out', 'd_in'):
            matrix = np.asarray(getattr(self, name), dtype=float)
            if not np.allclose(matrix, matrix.T, rtol=0, atol=1e-12):
                raise InternalConsistencyError('%s is not symmetric' % name)
            evals = np.linalg.eigvalsh(matrix)
            scale = max(1.0, float(np.max(np.abs(evals))))
            if np.min(evals) < -1e-12 * scale:
                raise InternalConsistencyError(
                    '%s is not positive semidefinite (eigenvalue %g)' % (
                        name, np.min(evals)))

    @classmethod
    def from_rates(cls, *, gamma12, gamma_c, n_exc):
        """Fluctuation-dissipation closure for the given damping rates.

        The full damping matrix, including the off-diagonal term of the
        shared reservoir, seeds correlated noise:
        d_out = 2 K (1 + n_exc) and d_in = 2 K n_exc.
        """
        damping = np.array([[gamma12, -gamma_c], [-gamma_c, gamma12]],
                           dtype=float)
        return cls(d_out=2 * damping * (1 + n_exc), d_in=2 * damping * n_exc)

    @property
    def damping(self):
        return 0.5 * (self.d_out - self.d_in)


@dataclasses.dataclass(frozen=True, eq=False)
class NoiseSpectrum:
    """Quadrature spectral covariance matrices over a frequency grid.

    Attributes:
        omega_grid (numpy.ndarray): detunings from the Larmor frequency.
        cm (numpy.ndarray): array of shape (n, 4, 4), one covariance matrix
            per frequency in (X1, P1, X2, P2) order, vacuum = identity.
        pedestal (numpy.ndarray): broad pedestal added to each diagonal.
    """

    omega_grid: np.ndarray
    cm: np.ndarray
    pedestal: np.ndarray

    def to_frame(self):
        """Flatten the ten independent matrix entries to a dataframe."""
        columns = {'omega': self.omega_grid}
        for i in range(4):
            for j in range(i, 4):
                columns['cm%d%d' % (i + 1, j + 1)] = self.cm[:, i, j]
        return pd.DataFrame(columns)


@dataclasses.dataclass(frozen=True, eq=False)
class SimulatedSpectrum(NoiseSpectrum):
    """Time-domain estimate of a NoiseSpectrum with standard errors."""

    cm_se: np.ndarray = None
    n_traj: int = 0

    def to_frame(self):
        frame = super().to_frame()
        for i in range(4):
            for j in range(i, 4):
                frame['se%d%d' % (i + 1, j + 1)] = self.cm_se[:, i, j]
        return frame


@dataclasses.dataclass(frozen=True)
class NarrowFeature:
    """Centre, height above vacuum and pedestal, and FWHM of a spectral
    peak."""

    center: float
    height: float
    width: float


def drift_matrix(params):
    """Drift matrix of (b1, b2^dagger).

    Args:
        params (SystemParams): model parameters.

    Returns:
        drift (DriftMatrix): m = [[-i D0 - g12, Gc], [Gc, i D0 - g12]].
    """
    delta = abs(params.delta0)
    g12 = gamma12(params)
    return DriftMatrix(m=np.array([[-1j * delta - g12, params.gamma_c],
                                   [params.gamma_c, 1j * delta - g12]]))


def noise_model(params):
    """Langevin noise correlations of the two-mode model."""
    return NoiseModel.from_rates(gamma12=gamma12(params),
                                 gamma_c=params.gamma_c, n_exc=params.n_exc)


def pedestal(params, omega):
    """Broad single-pass Lorentzian pedestal, uncorrelated between
    channels."""
    omega = np.asarray(omega, dtype=float)
    if params.broad_amp == 0:
        return np.zeros_like(omega)
    width2 = params.broad_width**2
    return params.broad_amp * width2 / (omega**2 + width2)


def susceptibility(drift, omega):
    """Response chi(w) = (-i w I - m)^-1 for every frequency of a grid."""
    drift = np.asarray(drift)
    omega = np.asarray(omega, dtype=float)
    eye = np.eye(drift.shape[0])
    return np.linalg.inv(-1j * omega[:, None, None] * eye - drift)


def normally_ordered_spectrum(*, drift, diffusion, omega, alpha=None,
                              beta=None):
    """Normally ordered quadrature spectra of a linear Langevin system.

    For drift m and input-noise density D the mode spectral matrix is
    B(w) = conj(chi(w)) D chi(w)^T. A quadrature y = alpha . v + beta . conj(v)
    then has the spectral covariance Re[alpha B(w)^T alpha^H +
    beta B(-w) beta^H].

    Args:
        drift (array_like): n x n drift matrix.
        diffusion (array_like): n x n input-noise density.
        omega (array_like): analysis frequencies.
        alpha (array_like): k x n coefficients of v. Defaults to the
            (X1, P1, X2, P2) rows of the two-mode model.
        beta (array_like): k x n coefficients of conj(v).

    Returns:
        spectra (numpy.ndarray): array of shape (len(omega), k, k).
    """
    alpha = QUADRATURE_ALPHA if alpha is None else np.asarray(alpha)
    beta = QUADRATURE_BETA if beta is None else np.asarray(beta)
    omega = np.asarray(omega, dtype=float)
    diffusion = np.asarray(diffusion)

    def mode_spectrum(w):
        chi = susceptibility(drift, w)
        return np.conj(chi) @ diffusion @ np.swapaxes(chi, -1, -2)

    b_pos = mode_spectrum(omega)
    b_neg = mode_spectrum(-omega)
    spectra = (alpha @ np.swapaxes(b_pos, -1, -2) @ alpha.conj().T +
               beta @ b_neg @ beta.conj().T).real
    return 0.5 * (spectra + np.swapaxes(spectra, -1, -2))


def spectral_cm(params, omega_grid):
    """Shot-noise normalised quadrature covariance matrix at each frequency.

    Args:
        params (SystemParams): model parameters.
        omega_grid (array_like): finite ascending detunings from the Larmor
            frequency.

    Returns:
        spectrum (NoiseSpectrum):
            identity (vacuum) plus eta_read times the atomic contribution plus
            the broad pedestal on the diagonal.
    """
    grid = tools.check_grid(omega_grid, name='omega grid')
    atomic = normally_ordered_spectrum(drift=drift_matrix(params).m,
                                       diffusion=noise_model(params).d_in,
                                       omega=grid)
    broad = pedestal(params, grid)
    cm = (np.eye(4) + params.eta_read * atomic +
          broad[:, None, None] * np.eye(4))
    return NoiseSpectrum(omega_grid=grid, cm=cm, pedestal=broad)


def cm_at_analysis_frequency(params):
    """Covariance matrix at the Larmor frequency (zero rotating-frame
    detuning)."""
    return spectral_cm(params, [0.0]).cm[0]


def variance_traces(spec):
    """Quadrature variance traces in dB relative to shot noise.

    Joint variances are halved so that vacuum reads 0 dB in every column.

    Args:
        spec (NoiseSpectrum): spectrum to convert.

    Returns:
        traces (pandas.DataFrame):
            columns omega, varx1_db, varx2_db, varxdiff_db
            (Var(X1 - X2) / 2) and varpsum_db (Var(P1 + P2) / 2).
    """
    cm = spec.cm
    var_xdiff = 0.5 * (cm[:, 0, 0] + cm[:, 2, 2] - 2 * cm[:, 0, 2])
    var_psum = 0.5 * (cm[:, 1, 1] + cm[:, 3, 3] + 2 * cm[:, 1, 3])
    return pd.DataFrame({'omega': spec.omega_grid,
                         'varx1_db': tools.to_db(cm[:, 0, 0]),
                         'varx2_db': tools.to_db(cm[:, 2, 2]),
                         'varxdiff_db': tools.to_db(var_xdiff),
                         'varpsum_db': tools.to_db(var_psum)})


def narrow_feature(spec, *, channel=1):
    """Narrow structure of one channel's X variance above vacuum and
    pedestal.

    The spectra are even in frequency, so the centre is reported as a
    magnitude.

    Args:
        spec (NoiseSpectrum): spectrum to analyse.
        channel (int): 1 or 2.

    Returns:
        feature (NarrowFeature): centre, height and FWHM of the feature.
    """
    if channel not in (1, 2):
        raise ValueError('channel must be 1 or 2, got %r' % channel)
    index = 2 * (channel - 1)
    narrow = spec.cm[:, index, index] - 1.0 - spec.pedestal
    center, height = tools.quadratic_peak(spec.omega_grid, narrow)
    width = tools.full_width_half_maximum(spec.omega_grid, narrow)
    return NarrowFeature(center=abs(center), height=height, width=width)


def stationary_covariance(params):
    """Stationary covariance <v v^H> of the c-number Langevin process.

    Solves the continuous Lyapunov equation m S + S m^H + D_in = 0.
    """
    drift = drift_matrix(params).m
    diffusion = noise_model(params).d_in
    cov = scipy.linalg.solve_continuous_lyapunov(drift, -diffusion)
    return 0.5 * (cov + cov.conj().T)


def _trajectory_records(*, schur, basis, noise_root, initial_root, n_steps,
                        dt, rng):
    """Quadrature records (X1, P1, X2, P2) of one Euler-Maruyama path.

    The update v[k+1] = A v[k] + L dW[k], A = I + m dt, is run in the Schur
    basis of A where it is triangular, so each component is a first-order
    recursion solved with lfilter.
    """
    def complex_normal(shape):
        draws = rng.standard_normal(shape + (2,))
        return (draws[..., 0] + 1j * draws[..., 1]) / np.sqrt(2)

    v0 = initial_root @ complex_normal((2,))
    increments = complex_normal((n_steps, 2)) * np.sqrt(dt) @ noise_root.T
    w0 = basis.conj().T @ v0
    u = increments @ basis.conj()

    t11, t12, t22 = schur[0, 0], schur[0, 1], schur[1, 1]
    w2, _ = scipy.signal.lfilter([1.0], [1.0, -t22], u[:, 1],
                                 zi=[t22 * w0[1]])
    w2_prev = np.concatenate(([w0[1]], w2[:-1]))
    w1, _ = scipy.signal.lfilter([1.0], [1.0, -t11], u[:, 0] + t12 * w2_prev,
                                 zi=[t11 * w0[0]])
    v = np.stack((w1, w2), axis=1) @ basis.T
    return np.stack((2 * v[:, 0].real, 2 * v[:, 0].imag,
                     2 * v[:, 1].real, -2 * v[:, 1].imag))


def _simulate_batch(*, params, seed, indices, dt, n_steps, nperseg):
    """Sums and sums of squares of per-trajectory cross spectra."""
    drift = drift_matrix(params).m
    schur, basis = scipy.linalg.schur(np.eye(2) + drift * dt,
                                      output='complex')
    noise_root = tools.symmetric_sqrt(noise_model(params).d_in)
    initial_root = tools.symmetric_sqrt(stationary_covariance(params))

    total = None
    total_sq = None
    for index in indices:
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence([seed, int(index)])))
        records = _trajectory_records(schur=schur, basis=basis,
                                      noise_root=noise_root,
                                      initial_root=initial_root,
                                      n_steps=n_steps, dt=dt, rng=rng)
        if not np.all(np.isfinite(records)):
            bad = int(np.argmax(~np.all(np.isfinite(records), axis=0)))
            raise StabilityError('non-finite sample in trajectory %d at step '
                                 '%d (dt=%g)' % (index, bad, dt))
        freqs, csd = scipy.signal.csd(records[:, None, :], records[None, :, :],
                                      fs=1.0 / dt, window='hann',
                                      nperseg=nperseg, detrend=False,
                                      return_onesided=False,
                                      scaling='density', axis=-1)
        csd = csd.real
        if total is None:
            total = np.zeros_like(csd)
            total_sq = np.zeros_like(csd)
        total += csd
        total_sq += csd**2
    return freqs, total, total_sq


def simulate_time_domain(params, *, seed, n_traj, dt, t_total, nperseg=None,
                         batch_size=32, n_jobs=1):
    """Estimate the noise spectrum from simulated homodyne records.

    Each trajectory integrates dv = m v dt + L dW with the Euler-Maruyama
    scheme, L the symmetric square root of the input-noise density and dW a
    circular complex Wiener increment, starting from the stationary
    distribution. The quadrature records are Welch-averaged with a Hann
    window and the periodograms are averaged over trajectories. Trajectory i
    draws from its own Philox stream keyed by (seed, i) and batches are
    reduced in index order, so the result depends only on seed, n_traj and
    batch_size.

    Args:
        params (SystemParams): model parameters.
        seed (int): non-negative base seed.
        n_traj (int): number of trajectories, at least 1.
        dt (float): time step, below 0.1 / gamma12.
        t_total (float): duration of each trajectory.
        nperseg (int): Welch segment length in steps. Defaults to the lesser
            of the record length and 1024.
        batch_size (int): trajectories per work unit. Defaults to 32.
        n_jobs (int): number of joblib workers. Defaults to 1.

    Returns:
        estimate (SimulatedSpectrum):
            covariance matrices and their standard errors on the ascending
            grid of Welch frequencies (angular, two sided).
    """
    g12 = gamma12(params)
    if not dt > 0 or dt >= 0.1 / g12:
        raise StabilityError('time step dt=%g must be positive and below '
                             '0.1/gamma12 = %g' % (dt, 0.1 / g12))
    if n_traj < 1:
        raise ValueError('n_traj must be at least 1, got %r' % n_traj)
    n_steps = int(round(t_total / dt))
    if nperseg is None:
        nperseg = min(n_steps, 1024)
    if n_steps < nperseg or nperseg < 2:
        raise ValueError('record of %d steps is too short for segments of %d'
                         % (n_steps, nperseg))

    batches = [np.arange(start, min(start + batch_size, n_traj))
               for start in range(0, n_traj, batch_size)]
    logger.info('simulating %d trajectories of %d steps in %d batches',
                n_traj, n_steps, len(batches))
    results = joblib.Parallel(n_jobs=n_jobs)(
        joblib.delayed(_simulate_batch)(params=params, seed=seed,
                                        indices=indices, dt=dt,
                                        n_steps=n_steps, nperseg=nperseg)
        for indices in batches)

    freqs = results[0][0]
    total = np.zeros_like(results[0][1])
    total_sq = np.zeros_like(results[0][2])
    for _, batch_total, batch_sq in results:
        total += batch_total
        total_sq += batch_sq

    mean = total / n_traj
    if n_traj > 1:
        var = np.clip(total_sq - n_traj * mean**2, 0, None) / (n_traj - 1)
        se = np.sqrt(var / n_traj)
    else:
        se = np.full_like(mean, np.nan)

    order = np.argsort(freqs, kind='stable')
    omega = 2 * np.pi * freqs[order]
    mean = np.moveaxis(mean[:, :, order], -1, 0)
    se = np.moveaxis(se[:, :, order], -1, 0)
    broad = pedestal(params, omega)
    cm = (np.eye(4) + params.eta_read * mean +
          broad[:, None, None] * np.eye(4))
    return SimulatedSpectrum(omega_grid=omega, cm=cm, pedestal=broad,
                             cm_se=params.eta_read * se, n_traj=n_traj)
