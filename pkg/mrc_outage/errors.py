"""
Exception hierarchy for the outage library.

Two families:
  - ``ParameterError``: the caller asked for something outside the model
    (also a ``ValueError`` so generic handlers keep working).
  - ``NumericalError``: an evaluator or solver could not deliver a result
    within its tolerances (also an ``ArithmeticError``).
"""
from __future__ import annotations

from typing import Any, Optional


class MrcOutageError(Exception):
    """Base class for every error raised by ``mrc_outage``."""


# ============================================================================
# Parameter errors
# ============================================================================

class ParameterError(MrcOutageError, ValueError):
    pass


class AlphaOutOfRange(ParameterError):
    """Path-loss exponent must be strictly greater than 2."""


class NonPositive(ParameterError):
    """A density, distance or scale factor that must be positive is not."""


class ZeroAntennas(ParameterError):
    pass


class AlphaMismatch(ParameterError):
    """An alpha=4 specialisation was called with another exponent."""


class AntennaCountMismatch(ParameterError):
    """An evaluator that exists only for some N was called with another N."""


class UnsupportedEvaluator(ParameterError):
    pass


class DegenerateDesign(ParameterError):
    """Regression design matrix is rank deficient."""


class ConfigError(ParameterError):
    pass


# ============================================================================
# Numerical errors
# ============================================================================

class NumericalError(MrcOutageError, ArithmeticError):
    pass


class MaxSubdivisionsExceeded(NumericalError):
    """Adaptive quadrature hit its subdivision limit.

    ``result`` holds the best estimate that was reached.
    """

    def __init__(self, message: str, result: Optional[Any] = None):
        super().__init__(message)
        self.result = result


class NonFiniteIntegrand(NumericalError):
    pass


class OutOfUnitInterval(NumericalError):
    """A probability evaluated outside [0, 1] beyond tolerance."""


class BracketFailure(NumericalError):
    pass


class DivisionByNearZero(NumericalError):
    pass


class EmptyField(NumericalError):
    """No interferers and no noise: the SIR sample is infinite."""
