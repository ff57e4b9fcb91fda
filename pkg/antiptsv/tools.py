# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing numerical helper functions shared by the model modules.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
This module provides grid validation, decibel conversion and the small
trace-analysis routines (peak location, curvature, slopes and widths) used to
summarise gain curves, separation curves and noise spectra.
"""


import numpy as np

from .errors import InternalConsistencyError


def check_grid(grid, *, name='grid', min_points=1, ascending=True):
    """Validate a one-dimensional grid of sample points.

    Args:
        grid (array_like): sample points.
        name (str): name used in error messages.
        min_points (int): minimum number of points required. Defaults to 1.
        ascending (bool): require strictly ascending values. Defaults to True.

    Returns:
        grid (numpy.ndarray): the grid as a float array.
    """
    values = np.asarray(grid, dtype=float).ravel()
    if values.size < min_points:
        raise ValueError('%s must contain at least %d point(s), got %d' % (
            name, min_points, values.size))
    if not np.all(np.isfinite(values)):
        raise ValueError('%s contains non-finite values' % name)
    if ascending and values.size > 1 and np.any(np.diff(values) <= 0):
        raise ValueError('%s must be strictly ascending' % name)
    return values


def linear_grid(*, start, stop, points):
    """Evenly spaced grid including both end points.

    Args:
        start (float): first grid value.
        stop (float): last grid value, larger than start.
        points (int): number of points, at least 2.

    Returns:
        grid (numpy.ndarray): the grid.
    """
    if points < 2:
        raise ValueError('a grid needs at least 2 points, got %d' % points)
    if not stop > start:
        raise ValueError('grid stop (%g) must exceed start (%g)' % (stop,
                                                                   start))
    return np.linspace(start, stop, int(points))


def to_db(values):
    """Convert linear power ratios to decibels (10 log10)."""
    return 10.0 * np.log10(np.asarray(values, dtype=float))


def quadratic_peak(x, y):
    """Locate the maximum of a sampled trace with parabolic refinement.

    The discrete argmax is refined with the parabola through it and its two
    neighbours. Equal maxima are resolved toward the smallest |x|. A trace with
    no variation has no unique peak.

    Args:
        x (array_like): ascending sample positions.
        y (array_like): trace values.

    Returns:
        (tuple): tuple containing:

        - x_peak (*float*):
            refined peak position, NaN for a flat trace.
        - y_peak (*float*):
            refined peak value, NaN for a flat trace.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = max(1.0, float(np.max(np.abs(y))))
    if np.ptp(y) <= 1e-14 * scale:
        return np.nan, np.nan

    candidates = np.flatnonzero(y == np.max(y))
    k = int(candidates[np.argmin(np.abs(x[candidates]))])
    if k == 0 or k == len(x) - 1:
        return float(x[k]), float(y[k])

    x0, x1, x2 = x[k - 1:k + 2]
    y0, y1, y2 = y[k - 1:k + 2]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
    c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 +
         x0 * x1 * (x0 - x1) * y2) / denom
    if a >= 0:
        return float(x1), float(y1)
    x_peak = -b / (2 * a)
    return float(x_peak), float(c - b**2 / (4 * a))


def second_difference(x, y):
    """Three-point second derivative at the interior points of a trace.

    Args:
        x (array_like): ascending sample positions.
        y (array_like): trace values.

    Returns:
        d2y (numpy.ndarray): second derivative estimates at x[1:-1].
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    left = (y[1:-1] - y[:-2]) / (x[1:-1] - x[:-2])
    right = (y[2:] - y[1:-1]) / (x[2:] - x[1:-1])
    return 2.0 * (right - left) / (x[2:] - x[:-2])


def max_curvature_location(x, y):
    """Position of the largest second derivative of a sampled curve.

    Args:
        x (array_like): ascending sample positions, at least 3.
        y (array_like): curve values.

    Returns:
        location (float): x at which the second difference is largest.
    """
    x = check_grid(x, name='x', min_points=3)
    d2y = second_difference(x, y)
    return float(x[1 + int(np.argmax(d2y))])


def steepest_descent_location(x, y):
    """Position of the most negative centred slope of a sampled curve.

    Args:
        x (array_like): ascending sample positions, at least 3.
        y (array_like): curve values.

    Returns:
        location (float): x at which the curve falls fastest.
    """
    x = check_grid(x, name='x', min_points=3)
    y = np.asarray(y, dtype=float)
    slope = (y[2:] - y[:-2]) / (x[2:] - x[:-2])
    return float(x[1 + int(np.argmin(slope))])


def full_width_half_maximum(x, y, *, baseline=0.0):
    """Full width at half maximum of the highest peak of a trace.

    Half-maximum crossings are located by linear interpolation on either side
    of the discrete maximum.

    Args:
        x (array_like): ascending sample positions.
        y (array_like): trace values.
        baseline (float): level from which the peak height is measured.

    Returns:
        width (float): FWHM, NaN when a crossing lies outside the trace.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    k = int(np.argmax(y))
    half = baseline + 0.5 * (y[k] - baseline)

    below_left = np.flatnonzero(y[:k] < half)
    below_right = np.flatnonzero(y[k:] < half)
    if below_left.size == 0 or below_right.size == 0:
        return np.nan
    i = below_left[-1]
    j = k + below_right[0]
    x_left = np.interp(half, [y[i], y[i + 1]], [x[i], x[i + 1]])
    x_right = np.interp(half, [y[j], y[j - 1]], [x[j], x[j - 1]])
    return float(x_right - x_left)


def symmetric_sqrt(matrix, *, tol=1e-12):
    """Hermitian positive-semidefinite square root of a matrix.

    Args:
        matrix (array_like): Hermitian positive-semidefinite matrix.
        tol (float): relative tolerance below which negative eigenvalues are
            treated as round-off and clamped to zero.

    Returns:
        root (numpy.ndarray): matrix L with L = L^H and L L = matrix.
    """
    matrix = np.asarray(matrix)
    evals, evecs = np.linalg.eigh(matrix)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if np.min(evals) < -tol * scale:
        raise InternalConsistencyError(
            'matrix is not positive semidefinite (eigenvalue %g)' %
            np.min(evals))
    evals = np.clip(evals, 0.0, None)
    root = (evecs * np.sqrt(evals)) @ evecs.conj().T
    if np.isrealobj(matrix):
        root = root.real
    return root
