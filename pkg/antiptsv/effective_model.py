# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing the effective two-channel model of the coupled spin waves.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
This module holds the model parameters, builds the effective non-Hermitian
Hamiltonian

    H = [[|D0| - i g12,  i Gc], [i Gc, -|D0| - i g12]]

with g12 = g0 + Gc + 2 Omega**2 / g13, and computes its eigenfrequencies (the
two supermodes), their regime (unbroken, exceptional point or broken) and
sweeps of the supermode gaps across the exceptional point at |D0| = Gc.

All rates are angular frequencies. The defaults are normalised so that the
coupling rate Gc is 1; they are a calibration of the model and have no
absolute physical meaning.
"""


import dataclasses
import enum
import logging
import math

import numpy as np
import pandas as pd

from . import tools
from .errors import ConfigError


logger = logging.getLogger(__name__)

# Fields of SystemParams that carry units of angular frequency. g_read is
# included because it multiplies a coherence that scales as 1 / rate.
RATE_FIELDS = ('delta0', 'gamma0', 'gamma_c', 'control_rabi', 'gamma13',
               'omega_larmor', 'broad_width', 'g_read')

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


class Regime(enum.Enum):
    """Symmetry regime of the effective Hamiltonian."""

    UNBROKEN = 'unbroken'
    EXCEPTIONAL_POINT = 'exceptional_point'
    BROKEN = 'broken'


@dataclasses.dataclass(frozen=True)
class SystemParams:
    """Rates, frequencies and readout calibration of the two-channel model.

    Attributes:
        delta0 (float): half the spin-wave frequency difference. Stored with
            its sign; the Hamiltonian uses the magnitude.
        gamma0 (float): intrinsic ground-state coherence decay rate.
        gamma_c (float): dissipative inter-channel coupling rate.
        control_rabi (float): control field Rabi frequency (same in both
            channels).
        gamma13 (float): optical coherence decay rate.
        omega_larmor (float): Larmor frequency, the centre of the analysed
            noise spectra.
        n_exc (float): excess noise occupancy of the atomic reservoirs.
        eta_read (float): readout gain from spin to optical spectral density.
        broad_amp (float): height of the broad single-pass pedestal in
            shot-noise units.
        broad_width (float): half width of the broad pedestal.
        alpha_bg (float): residual probe absorption of the thin medium.
        g_read (float): coherence-to-field readout constant of the probe.
    """

    delta0: float = 0.0
    gamma0: float = 0.16
    gamma_c: float = 1.0
    control_rabi: float = 0.8
    gamma13: float = 2.0
    omega_larmor: float = 50.0
    n_exc: float = 1.0
    eta_read: float = 0.2
    broad_amp: float = 0.5
    broad_width: float = 20.0
    alpha_bg: float = 0.0429
    g_read: float = -0.1834

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool) or not isinstance(
                    value, (int, float, np.integer, np.floating)):
                raise ConfigError('%s must be a real number, got %r' % (
                    field.name, value))
            if not math.isfinite(value):
                raise ConfigError('%s must be finite, got %r' % (field.name,
                                                                 value))
        for name in ('gamma0', 'gamma13'):
            if getattr(self, name) <= 0:
                raise ConfigError('%s must be positive, got %r' % (
                    name, getattr(self, name)))
        for name in ('gamma_c', 'n_exc', 'eta_read', 'broad_amp',
                     'broad_width'):
            if getattr(self, name) < 0:
                raise ConfigError('%s must be non-negative, got %r' % (
                    name, getattr(self, name)))
        if self.broad_amp > 0 and self.broad_width == 0:
            raise ConfigError('broad_width must be positive when broad_amp '
                              'is non-zero')
        if not 0 <= self.alpha_bg <= 1:
            raise ConfigError('alpha_bg must lie in [0, 1], got %r' %
                              self.alpha_bg)

    @property
    def pump_rate(self):
        """Optical pumping rate control_rabi**2 / gamma13."""
        return self.control_rabi**2 / self.gamma13

    @property
    def gamma12(self):
        """Total ground-state coherence decay rate."""
        return gamma12(self)

    @property
    def kappa_drive(self):
        """Probe drive normalisation control_rabi / gamma13."""
        return self.control_rabi / self.gamma13

    def replace(self, **changes):
        """Return a copy with the given fields changed (and re-validated)."""
        return dataclasses.replace(self, **changes)

    def scaled(self, factor):
        """Return a copy with every rate and frequency multiplied by factor.

        Dimensionless fields are unchanged, so gains, regimes and spectra in
        shot-noise units are invariant under the rescaling.
        """
        if not factor > 0:
            raise ConfigError('scale factor must be positive, got %r' %
                              factor)
        return self.replace(**{name: getattr(self, name) * factor
                               for name in RATE_FIELDS})


@dataclasses.dataclass(frozen=True)
class SupermodePair:
    """Eigenfrequencies of the effective Hamiltonian and their regime.

    The real part of each frequency is the EIT centre and minus the imaginary
    part is the linewidth.
    """

    omega_plus: complex
    omega_minus: complex
    regime: Regime

    @property
    def re_gap(self):
        return abs(self.omega_plus.real - self.omega_minus.real)

    @property
    def im_gap(self):
        return abs(self.omega_plus.imag - self.omega_minus.imag)


def gamma12(params):
    """Total decay rate of the ground-state coherence.

    Args:
        params (SystemParams): model parameters.

    Returns:
        gamma12 (float): gamma0 + gamma_c + 2 * control_rabi**2 / gamma13.
    """
    return params.gamma0 + params.gamma_c + 2 * params.pump_rate


def build_hamiltonian(params, *, signed=False):
    """Effective non-Hermitian Hamiltonian of the two spin-wave channels.

    Args:
        params (SystemParams): model parameters.
        signed (bool): use the signed delta0 instead of its magnitude. The
            probe response uses the signed form so that exchanging the
            channels corresponds to delta0 -> -delta0. Defaults to False.

    Returns:
        hamiltonian (numpy.ndarray): complex-symmetric 2x2 matrix.
    """
    delta = params.delta0 if signed else abs(params.delta0)
    g12 = gamma12(params)
    coupling = 1j * params.gamma_c
    return np.array([[delta - 1j * g12, coupling],
                     [coupling, -delta - 1j * g12]])


def anti_pt_conjugate(matrix):
    """Apply the swap-and-conjugate operation P conj(H) P to a 2x2 matrix."""
    return SWAP @ np.conj(np.asarray(matrix)) @ SWAP


def is_anti_pt_symmetric(matrix, *, atol=1e-12):
    """Check whether a 2x2 matrix anticommutes with the swap-and-conjugate
    operation, i.e. P conj(H) P = -H entrywise within atol."""
    matrix = np.asarray(matrix)
    return bool(np.allclose(anti_pt_conjugate(matrix), -matrix, rtol=0,
                            atol=atol))


def classify_regime(delta0, gamma_c, *, tol=1e-6):
    """Regime of the supermodes for a given detuning and coupling rate.

    Args:
        delta0 (float): detuning (its magnitude is used).
        gamma_c (float): coupling rate.
        tol (float): relative tolerance on |delta0| = gamma_c.

    Returns:
        regime (Regime): classification of the supermodes.
    """
    delta = abs(delta0)
    if gamma_c == 0 and delta == 0:
        return Regime.EXCEPTIONAL_POINT
    if abs(delta - gamma_c) <= tol * gamma_c:
        return Regime.EXCEPTIONAL_POINT
    if delta < gamma_c * (1 - tol):
        return Regime.UNBROKEN
    return Regime.BROKEN


def supermodes(params, *, tol=1e-6):
    """Closed-form eigenfrequencies of the effective Hamiltonian.

    omega_pm = -i gamma12 +/- sqrt(delta0**2 - gamma_c**2) with the principal
    branch of the square root, so omega_plus has the larger real part in the
    broken regime and the smaller linewidth in the unbroken regime. The
    degenerate input delta0 = gamma_c = 0 gives two equal modes -i gamma12
    classified as an exceptional point.

    Args:
        params (SystemParams): model parameters.
        tol (float): relative tolerance of the exceptional point test.
            Defaults to 1e-6.

    Returns:
        pair (SupermodePair): the two supermodes and their regime.
    """
    if not tol > 0:
        raise ValueError('tol must be positive, got %r' % tol)
    root = np.sqrt(complex(params.delta0**2 - params.gamma_c**2))
    centre = -1j * gamma12(params)
    return SupermodePair(omega_plus=complex(centre + root),
                         omega_minus=complex(centre - root),
                         regime=classify_regime(params.delta0, params.gamma_c,
                                                tol=tol))


def numerical_supermodes(params):
    """Supermodes from a generic eigensolver, ordered like supermodes().

    The eigenvalues of build_hamiltonian are paired with the closed-form
    branches by minimum distance. Close to the exceptional point the
    eigensolver loses precision as sqrt(machine epsilon).

    Returns:
        (tuple): tuple containing:

        - omega_plus (*complex*):
            eigenvalue nearest the closed-form omega_plus.
        - omega_minus (*complex*):
            the other eigenvalue.
    """
    evals = np.linalg.eigvals(build_hamiltonian(params))
    pair = supermodes(params)
    if abs(evals[0] - pair.omega_plus) <= abs(evals[1] - pair.omega_plus):
        return complex(evals[0]), complex(evals[1])
    return complex(evals[1]), complex(evals[0])


def eigenvector_overlap(params):
    """Normalised overlap |<v+|v->| of the two right eigenvectors of H.

    The overlap is |delta0| / gamma_c in the unbroken regime and
    gamma_c / |delta0| in the broken regime. It reaches 1 at the exceptional
    point, where the eigenvectors coalesce. When either rate is zero the
    eigenvectors are orthogonal and the overlap is 0.

    Args:
        params (SystemParams): model parameters.

    Returns:
        overlap (float): value in [0, 1].
    """
    delta = abs(params.delta0)
    gamma_c = params.gamma_c
    if delta == 0 or gamma_c == 0:
        return 0.0
    return min(delta, gamma_c) / max(delta, gamma_c)


def eigengap_sweep(params, delta0_grid):
    """Gaps between the supermode centres and linewidths over a detuning grid.

    Args:
        params (SystemParams): model parameters; delta0 is replaced by each
            grid value.
        delta0_grid (array_like): non-empty ascending detuning grid.

    Returns:
        gaps (pandas.DataFrame):
            columns delta0, re_gap (|Re w+ - Re w-|, zero for
            |delta0| <= gamma_c) and im_gap (|Im w+ - Im w-|, zero beyond).
    """
    grid = tools.check_grid(delta0_grid, name='delta0 grid')
    root = np.sqrt((grid**2 - params.gamma_c**2).astype(complex))
    logger.debug('eigengap sweep over %d detunings', grid.size)
    return pd.DataFrame({'delta0': grid,
                         're_gap': 2 * np.abs(root.real),
                         'im_gap': 2 * np.abs(root.imag)})
