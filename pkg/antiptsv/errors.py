# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Module containing the exception classes raised by the antiptsv package.

Part of the antiptsv package for simulating dissipatively coupled spin waves.
Configuration problems derive from ValueError and numeric failures from
ArithmeticError, so callers that do not know about this module can still catch
them with the builtin types.
"""


class AntiPTError(Exception):
    """Base class for all errors raised by antiptsv."""


class ConfigError(AntiPTError, ValueError):
    """Invalid model parameters, probe settings or configuration file."""


class NumericError(AntiPTError, ArithmeticError):
    """A numerical computation failed or produced an unusable result."""


class StabilityError(NumericError):
    """Time step too large, unstable dynamics or non-finite samples."""


class NonPhysicalStateError(NumericError):
    """A covariance matrix violates symmetry or the uncertainty principle."""


class DegenerateSpectrumError(NumericError):
    """The symplectic spectrum discriminant is negative beyond tolerance."""


class InternalConsistencyError(NumericError):
    """A consistency check that valid inputs cannot fail has failed."""


class UndefinedQuadratureError(AntiPTError, ValueError):
    """Quadratures requested from Stokes parameters with S_z = 0."""
