# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing functions to quantify correlations of two-mode Gaussian
states.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
A two-mode Gaussian state is described by its 4x4 covariance matrix (CM) in
(X1, P1, X2, P2) order with vacuum variance 1. This module provides the
quadratures obtained from light Stokes operators, the local symplectic
invariants and standard form of a CM, its symplectic eigenvalues, the Gaussian
quantum discord in closed form together with a brute-force minimisation over
Gaussian measurements that checks it, the mutual information and the Duan
separability value. Entropies are in bits.
"""


import dataclasses
import logging

import joblib
import numpy as np
import pandas as pd
import scipy.optimize
import scipy.special

from . import tools
from .errors import (DegenerateSpectrumError, InternalConsistencyError,
                     NonPhysicalStateError, NumericError,
                     UndefinedQuadratureError)


logger = logging.getLogger(__name__)

PHYSICALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-12
DEGENERACY_GAP = 1e-4

SYMPLECTIC_FORM = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclasses.dataclass(frozen=True)
class DiscordResult:
    """Gaussian discord of a two-mode state and its ingredients.

    Attributes:
        discord (float): Gaussian discord in bits.
        nu_plus (float): larger symplectic eigenvalue.
        nu_minus (float): smaller symplectic eigenvalue.
        i1, i2, i3, i4 (float): det A, det B, det C and det CM.
        duan_value (float): Duan separability value.
        e_min (float): minimal conditional determinant of the unmeasured
            mode.
        mutual_information (float): total correlations in bits.
        side (int): channel on which the Gaussian measurement acts.
    """

    discord: float
    nu_plus: float
    nu_minus: float
    i1: float
    i2: float
    i3: float
    i4: float
    duan_value: float
    e_min: float
    mutual_information: float
    side: int = 1

    @property
    def classical_correlation(self):
        """Classical part of the correlations, mutual information minus
        discord."""
        return self.mutual_information - self.discord


def quadratures_from_stokes(sx, sy, sz):
    """Quadratures X = Sx / sqrt|Sz| and P = Sy / sqrt|Sz|.

    Args:
        sx (float): Stokes parameter S_x.
        sy (float): Stokes parameter S_y.
        sz (float): Stokes parameter S_z of the strong local oscillator.

    Returns:
        (tuple): tuple containing:

        - x (*float*): amplitude quadrature.
        - p (*float*): phase quadrature.
    """
    sz = np.asarray(sz, dtype=float)
    if np.any(sz == 0):
        raise UndefinedQuadratureError('quadratures are undefined for S_z = 0')
    norm = np.sqrt(np.abs(sz))
    return sx / norm, sy / norm


def _blocks(cm):
    return cm[:2, :2], cm[2:, 2:], cm[:2, 2:]


def symplectic_invariants(cm):
    """Local symplectic invariants (det A, det B, det C, det CM)."""
    cm = np.asarray(cm, dtype=float)
    block_a, block_b, block_c = _blocks(cm)
    return (float(np.linalg.det(block_a)), float(np.linalg.det(block_b)),
            float(np.linalg.det(block_c)), float(np.linalg.det(cm)))


def _symplectic_pair(invariants):
    """Symplectic eigenvalues from the invariants, without validation."""
    i1, i2, i3, i4 = invariants
    delta = i1 + i2 + 2 * i3
    disc = delta**2 - 4 * i4
    if disc < -PHYSICALITY_TOL * max(1.0, delta**2):
        raise DegenerateSpectrumError(
            'negative symplectic discriminant %g (Delta=%g, det=%g)' % (
                disc, delta, i4))
    root = np.sqrt(max(disc, 0.0))
    nu_plus = np.sqrt(max(0.5 * (delta + root), 0.0))
    nu_minus = np.sqrt(max(0.5 * (delta - root), 0.0))
    return float(nu_plus), float(nu_minus)


def _symplectic_spectrum(cm):
    """Symplectic eigenvalues of a validated-shape CM.

    The invariant formula loses precision when the two eigenvalues nearly
    coincide (pure states), so that case is solved as the Hermitian
    eigenproblem of i L Omega L with L = sqrt(CM).
    """
    nu_plus, nu_minus = _symplectic_pair(symplectic_invariants(cm))
    if nu_plus - nu_minus > DEGENERACY_GAP * nu_plus:
        return nu_plus, nu_minus
    root = tools.symmetric_sqrt(cm)
    evals = np.linalg.eigvalsh(1j * root @ SYMPLECTIC_FORM @ root)
    return float(evals[3]), float(evals[2])


def validate_cm(cm, *, tol=PHYSICALITY_TOL):
    """Check that a matrix is a physical two-mode covariance matrix.

    Args:
        cm (array_like): candidate 4x4 covariance matrix.
        tol (float): tolerance on the smaller symplectic eigenvalue >= 1.

    Returns:
        cm (numpy.ndarray): the symmetrised matrix.
    """
    cm = np.asarray(cm, dtype=float)
    if cm.shape != (4, 4):
        raise NonPhysicalStateError('covariance matrix must be 4x4, got %s' %
                                    (cm.shape,))
    if not np.all(np.isfinite(cm)):
        raise NonPhysicalStateError('covariance matrix has non-finite entries')
    scale = max(1.0, float(np.max(np.abs(cm))))
    if np.max(np.abs(cm - cm.T)) > SYMMETRY_TOL * scale:
        raise NonPhysicalStateError('covariance matrix is not symmetric')
    cm = 0.5 * (cm + cm.T)
    if np.min(np.linalg.eigvalsh(cm)) <= 0:
        raise NonPhysicalStateError('covariance matrix is not positive '
                                    'definite')
    nu_minus = _symplectic_spectrum(cm)[1]
    if nu_minus < 1 - tol:
        raise NonPhysicalStateError('symplectic eigenvalue %.12g violates the '
                                    'uncertainty principle' % nu_minus)
    return cm


def standard_form(cm):
    """Standard-form parameters (a, b, c_plus, c_minus) of a covariance
    matrix.

    The standard form [[a, 0, c+, 0], [0, a, 0, c-], [c+, 0, b, 0],
    [0, c-, 0, b]] has the same four local symplectic invariants as cm, with
    |c_plus| >= |c_minus| and c_plus >= 0.

    Args:
        cm (array_like): physical covariance matrix.

    Returns:
        (tuple): tuple containing:

        - a (*float*): sqrt(det A).
        - b (*float*): sqrt(det B).
        - c_plus (*float*): larger correlation parameter.
        - c_minus (*float*): smaller correlation parameter, sign of det C.
    """
    i1, i2, i3, i4 = symplectic_invariants(validate_cm(cm))
    a = np.sqrt(i1)
    b = np.sqrt(i2)
    ab = a * b
    sum_sq = (ab**2 + i3**2 - i4) / ab
    disc = max(sum_sq**2 - 4 * i3**2, 0.0)
    c_plus_sq = max(0.5 * (sum_sq + np.sqrt(disc)), 0.0)
    c_minus_sq = max(0.5 * (sum_sq - np.sqrt(disc)), 0.0)
    c_plus = np.sqrt(c_plus_sq)
    c_minus = np.copysign(np.sqrt(c_minus_sq), i3)
    return float(a), float(b), float(c_plus), float(c_minus)


def from_standard_form(a, b, c_plus, c_minus):
    """Covariance matrix in standard form."""
    return np.array([[a, 0.0, c_plus, 0.0],
                     [0.0, a, 0.0, c_minus],
                     [c_plus, 0.0, b, 0.0],
                     [0.0, c_minus, 0.0, b]])


def symplectic_eigenvalues(cm):
    """Symplectic eigenvalues (nu_plus, nu_minus) of a covariance matrix.

    2 nu_pm**2 = Delta +/- sqrt(Delta**2 - 4 det CM) with
    Delta = det A + det B + 2 det C, solved as a Hermitian eigenproblem when
    the pair is nearly degenerate. Values marginally below 1 within the
    physicality tolerance are clamped to 1.
    """
    cm = validate_cm(cm)
    nu_plus, nu_minus = _symplectic_spectrum(cm)
    if nu_minus < 1:
        if nu_minus < 1 - 1e-12:
            logger.warning('clamping symplectic eigenvalue %.12g to 1',
                           nu_minus)
        nu_minus = 1.0
        nu_plus = max(nu_plus, 1.0)
    return nu_plus, nu_minus


def entropy_function(x):
    """Entropy f(x) of a single-mode thermal state with symplectic eigenvalue
    x.

    f(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), f(1) = 0.

    Args:
        x (array_like): symplectic eigenvalues, >= 1 within tolerance.

    Returns:
        f (numpy.ndarray or float): entropy in bits.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 1 - PHYSICALITY_TOL):
        raise NumericError('entropy function evaluated below 1 (min %g)' %
                           np.min(x))
    x = np.maximum(x, 1.0)
    upper = 0.5 * (x + 1)
    lower = 0.5 * (x - 1)
    value = (scipy.special.xlogy(upper, upper) -
             scipy.special.xlogy(lower, lower)) / np.log(2)
    return value if value.ndim else float(value)


def _ordered_invariants(cm, side):
    """Invariants ordered as (unmeasured, measured, det C, det CM)."""
    if side not in (1, 2):
        raise ValueError('side must be 1 or 2, got %r' % side)
    i1, i2, i3, i4 = symplectic_invariants(cm)
    if side == 1:
        return i2, i1, i3, i4
    return i1, i2, i3, i4


def minimal_conditional_determinant(cm, *, side=1):
    """Minimum over Gaussian measurements on one mode of the determinant of
    the conditional state of the other mode.

    Args:
        cm (array_like): physical covariance matrix.
        side (int): channel that is measured. Defaults to 1.

    Returns:
        e_min (float): minimal conditional determinant.
    """
    cm = validate_cm(cm)
    alpha, beta, gamma, delta = _ordered_invariants(cm, side)
    # det C = 0 with a rank-one C is still correlated; only C = 0 is a product
    block_c = _blocks(cm)[2]
    if (np.max(np.abs(block_c)) <= SYMMETRY_TOL * max(1.0, np.max(np.abs(cm)))
            or beta - 1 <= 1e-14):
        return alpha
    if (delta - alpha * beta)**2 <= (1 + beta) * gamma**2 * (alpha + delta):
        inner = gamma**2 + (beta - 1) * (delta - alpha)
        return ((2 * gamma**2 + (beta - 1) * (delta - alpha) +
                 2 * abs(gamma) * np.sqrt(max(inner, 0.0))) / (beta - 1)**2)
    inner = (gamma**4 + (delta - alpha * beta)**2 -
             2 * gamma**2 * (delta + alpha * beta))
    return ((alpha * beta - gamma**2 + delta - np.sqrt(max(inner, 0.0))) /
            (2 * beta))


def mutual_information(cm):
    """Quantum mutual information of a two-mode Gaussian state in bits."""
    cm = validate_cm(cm)
    i1, i2, _, _ = symplectic_invariants(cm)
    nu_plus, nu_minus = symplectic_eigenvalues(cm)
    return float(entropy_function(np.sqrt(i1)) + entropy_function(np.sqrt(i2))
                 - entropy_function(nu_plus) - entropy_function(nu_minus))


def duan_criterion(cm):
    """Duan value [Var(X1 - X2) + Var(P1 + P2)] / 4.

    A value below 1 certifies entanglement; 1 or more is inconclusive.
    """
    cm = np.asarray(cm, dtype=float)
    var_xdiff = cm[0, 0] + cm[2, 2] - 2 * cm[0, 2]
    var_psum = cm[1, 1] + cm[3, 3] + 2 * cm[1, 3]
    return float(0.25 * (var_xdiff + var_psum))


def _finish_discord(value, *, tol=PHYSICALITY_TOL):
    if value < -tol:
        raise InternalConsistencyError('negative discord %g' % value)
    return max(float(value), 0.0)


def gaussian_discord(cm, *, side=1):
    """Gaussian quantum discord in closed form.

    D = f(sqrt(det B)) - f(nu+) - f(nu-) + f(sqrt(E_min)) where B is the
    measured mode and E_min the minimal conditional determinant of the other
    mode.

    Args:
        cm (array_like): physical covariance matrix.
        side (int): channel on which the Gaussian measurement acts. Defaults
            to channel 1.

    Returns:
        result (DiscordResult): discord and the quantities it is built from.
    """
    cm = validate_cm(cm)
    i1, i2, i3, i4 = symplectic_invariants(cm)
    nu_plus, nu_minus = symplectic_eigenvalues(cm)
    measured = i1 if side == 1 else i2
    e_min = minimal_conditional_determinant(cm, side=side)
    value = (entropy_function(np.sqrt(measured)) - entropy_function(nu_plus)
             - entropy_function(nu_minus) + entropy_function(np.sqrt(e_min)))
    return DiscordResult(discord=_finish_discord(value), nu_plus=nu_plus,
                         nu_minus=nu_minus, i1=i1, i2=i2, i3=i3, i4=i4,
                         duan_value=duan_criterion(cm), e_min=float(e_min),
                         mutual_information=mutual_information(cm), side=side)


def _measurement_blocks(cm, side):
    """Blocks (unmeasured A, measured B, correlations C) for a side."""
    block_a, block_b, block_c = _blocks(cm)
    if side == 1:
        return block_b, block_a, block_c.T
    return block_a, block_b, block_c


def _conditional_det(blocks, theta, log_s):
    """Conditional determinant after a general-dyne measurement with seed
    covariance R(theta) diag(s, 1/s) R(theta)^T."""
    block_a, block_b, block_c = blocks
    theta, log_s = np.broadcast_arrays(np.asarray(theta, dtype=float),
                                       np.asarray(log_s, dtype=float))
    s = np.exp(log_s)
    cos, sin = np.cos(theta), np.sin(theta)
    m11 = block_b[0, 0] + s * cos**2 + sin**2 / s
    m22 = block_b[1, 1] + s * sin**2 + cos**2 / s
    m12 = block_b[0, 1] + (s - 1 / s) * cos * sin
    det_m = m11 * m22 - m12**2
    inv = np.stack((np.stack((m22, -m12), -1), np.stack((-m12, m11), -1)),
                   -2) / det_m[..., None, None]
    eps = block_a - block_c @ inv @ block_c.T
    return eps[..., 0, 0] * eps[..., 1, 1] - eps[..., 0, 1]**2


def _homodyne_det(blocks, theta):
    """Conditional determinant after an ideal homodyne measurement."""
    block_a, block_b, block_c = blocks
    theta = np.asarray(theta, dtype=float)
    u = np.stack((np.cos(theta), np.sin(theta)), -1)
    cu = u @ block_c.T
    ubu = np.einsum('...i,ij,...j->...', u, block_b, u)
    eps = block_a - cu[..., :, None] * cu[..., None, :] / ubu[..., None, None]
    return eps[..., 0, 0] * eps[..., 1, 1] - eps[..., 0, 1]**2


def _grid_minimum(blocks, thetas, log_s):
    dets = _conditional_det(blocks, thetas[:, None], log_s[None, :])
    k = np.unravel_index(np.argmin(dets), dets.shape)
    return float(dets[k]), float(thetas[k[0]]), float(log_s[k[1]])


def discord_numeric_oracle(cm, grid_size=256, *, side=1, n_jobs=1):
    """Gaussian discord by direct minimisation over Gaussian measurements.

    The conditional determinant is minimised over single-mode Gaussian
    measurements with seed squeezing s in [1e-3, 1e3] (log grid, s = 1
    included) and angle theta in [0, pi), plus the homodyne limit. The grid
    minimum is then polished with bounded local optimisers.

    Args:
        cm (array_like): physical covariance matrix.
        grid_size (int): points per grid axis, at least 32.
        side (int): measured channel. Defaults to 1.
        n_jobs (int): joblib workers sharing the angle grid. Defaults to 1.

    Returns:
        discord (float): discord estimate in bits.
    """
    if grid_size < 32:
        raise ValueError('grid_size must be at least 32, got %r' % grid_size)
    cm = validate_cm(cm)
    blocks = _measurement_blocks(cm, side)
    nu_plus, nu_minus = symplectic_eigenvalues(cm)
    measured = np.linalg.det(blocks[1])
    log_bound = 3 * np.log(10)

    thetas = np.linspace(0, np.pi, grid_size, endpoint=False)
    log_s = np.union1d(np.linspace(-log_bound, log_bound, grid_size), [0.0])
    chunks = np.array_split(thetas, max(1, int(n_jobs)))
    minima = joblib.Parallel(n_jobs=n_jobs)(
        joblib.delayed(_grid_minimum)(blocks, chunk, log_s)
        for chunk in chunks if chunk.size)
    best, theta0, log_s0 = min(minima, key=lambda item: item[0])

    step = np.pi / grid_size
    polished = scipy.optimize.minimize(
        lambda x: _conditional_det(blocks, x[0], x[1]), [theta0, log_s0],
        method='L-BFGS-B',
        bounds=[(theta0 - 2 * step, theta0 + 2 * step),
                (-log_bound, log_bound)],
        options={'ftol': 1e-15, 'gtol': 1e-13})
    best = min(best, float(polished.fun))

    hom_grid = _homodyne_det(blocks, thetas)
    k = int(np.argmin(hom_grid))
    hom = scipy.optimize.minimize_scalar(
        lambda t: _homodyne_det(blocks, t),
        bounds=(thetas[k] - step, thetas[k] + step), method='bounded',
        options={'xatol': 1e-12})
    best = min(best, float(hom_grid[k]), float(hom.fun))

    value = (entropy_function(np.sqrt(measured)) - entropy_function(nu_plus)
             - entropy_function(nu_minus) +
             entropy_function(np.sqrt(max(best, 1.0))))
    return _finish_discord(value)


def discord_spectrum(spec, *, side=1):
    """Discord, Duan value and mutual information at every frequency of a
    noise spectrum.

    Args:
        spec (NoiseSpectrum): spectrum whose covariance matrices are
            analysed.
        side (int): measured channel. Defaults to 1.

    Returns:
        table (pandas.DataFrame):
            columns omega, discord, duan and mutual_information.
    """
    results = [gaussian_discord(cm, side=side) for cm in spec.cm]
    return pd.DataFrame({
        'omega': spec.omega_grid,
        'discord': [res.discord for res in results],
        'duan': [res.duan_value for res in results],
        'mutual_information': [res.mutual_information for res in results]})
