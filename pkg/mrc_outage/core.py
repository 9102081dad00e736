"""
Domain types and single-antenna closed forms.

The receiver sits at the origin, the desired transmitter at distance ``d``,
and interferers form a Poisson field of density ``lam``. Path loss is
``r**-alpha`` with ``alpha > 2`` and every fading power gain is unit-mean
exponential. All outage formulas depend on ``lam`` and ``d`` only through
``lam * d**2``, which ``scale_transform`` exploits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .config import UNIT_INTERVAL_SLACK
from .errors import AlphaOutOfRange, NonPositive, OutOfUnitInterval, ZeroAntennas

# [0, 1]
Probability = float


class ModelKind(str, Enum):
    """Correlation model assumed for the per-antenna interference."""

    EXACT_CORRELATED = "exact"
    FULL_CORRELATION = "full-correlation"
    NO_CORRELATION = "no-correlation"
    MIN_FADING = "min-fading"
    MAX_FADING = "max-fading"


DEFAULT_MODEL = ModelKind.EXACT_CORRELATED


@dataclass(frozen=True)
class SystemParams:
    """Interferer density, path-loss exponent, link distance and antenna count."""

    lam: float
    alpha: float
    d: float
    n_antennas: int

    def with_antennas(self, n_antennas: int) -> "SystemParams":
        return replace(self, n_antennas=n_antennas)

    def with_density(self, lam: float) -> "SystemParams":
        return replace(self, lam=lam)


def check_alpha(alpha: float) -> float:
    if not math.isfinite(alpha) or alpha <= 2.0:
        raise AlphaOutOfRange(f"path-loss exponent must be > 2, got {alpha}")
    return alpha


def validate_params(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged when every model invariant holds."""
    check_alpha(p.alpha)
    if not (p.lam > 0.0 and math.isfinite(p.lam)):
        raise NonPositive(f"density must be > 0, got {p.lam}")
    if not (p.d > 0.0 and math.isfinite(p.d)):
        raise NonPositive(f"link distance must be > 0, got {p.d}")
    if int(p.n_antennas) != p.n_antennas or p.n_antennas < 1:
        raise ZeroAntennas(f"antenna count must be a positive integer, got {p.n_antennas}")
    return p


def check_probability(value: float, what: str = "probability",
                      slack: float = UNIT_INTERVAL_SLACK) -> Probability:
    """Clip rounding noise into [0, 1]; anything further out is an error."""
    if not math.isfinite(value) or value < -slack or value > 1.0 + slack:
        raise OutOfUnitInterval(f"{what} = {value!r} is outside [0, 1]")
    return min(1.0, max(0.0, value))


def csc(x: float) -> float:
    return 1.0 / math.sin(x)


def interference_scale_c(lam: float, alpha: float) -> float:
    """c = (2/alpha) * pi**2 * lam * csc(2*pi/alpha).

    ``exp(-c * s**(2/alpha))`` is the Laplace transform of the Poisson-Rayleigh
    interference.
    """
    check_alpha(alpha)
    if lam < 0.0:
        raise NonPositive(f"density must be >= 0, got {lam}")
    return (2.0 / alpha) * math.pi ** 2 * lam * csc(2.0 * math.pi / alpha)


def link_scale(p: SystemParams) -> float:
    return p.lam * p.d ** 2


def single_antenna_exponent(T: float, p: SystemParams) -> float:
    if T < 0.0:
        raise NonPositive(f"threshold must be >= 0, got {T}")
    return interference_scale_c(p.lam, p.alpha) * p.d ** 2 * T ** (2.0 / p.alpha)


def single_antenna_ccdf(T: float, p: SystemParams) -> Probability:
    validate_params(p)
    return math.exp(-single_antenna_exponent(T, p))


def single_antenna_cdf(T: float, p: SystemParams) -> Probability:
    """Outage of the single-antenna link, exact down to tiny probabilities."""
    validate_params(p)
    return -math.expm1(-single_antenna_exponent(T, p))


def scale_transform(p: SystemParams, kappa: float) -> SystemParams:
    """Stretch all lengths by ``kappa``: (lam / kappa**2, alpha, kappa * d, N)."""
    if not kappa > 0.0:
        raise NonPositive(f"scale factor must be > 0, got {kappa}")
    return SystemParams(lam=p.lam / kappa ** 2, alpha=p.alpha, d=kappa * p.d,
                        n_antennas=p.n_antennas)


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)
