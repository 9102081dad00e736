"""
Network-level quantities derived from the outage evaluators: critical
density, the small-density outage slope, model deviation ratios and the
sqrt(N) fit of the density gain.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import bisect
from scipy.stats import linregress

from . import bounds, quadrature
from .config import (
    BISECTION_MAX_ITER,
    BISECTION_REL_XTOL,
    BRACKET_FACTOR,
    BRACKET_MAX_EXPANSIONS,
    CRITICAL_DENSITY_TOL,
    DELTA_FLOOR,
    SCDO_LAMBDA_MAX,
    SCDO_LAMBDA_MIN,
    SCDO_POINTS,
)
from .core import ModelKind, SystemParams, check_alpha, csc, validate_params
from .errors import (
    BracketFailure,
    DegenerateDesign,
    DivisionByNearZero,
    NonPositive,
    NumericalError,
    UnsupportedEvaluator,
)
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .simulator import MonteCarloConfig, critical_density_mc

logger = logging.getLogger(__name__)


class Evaluator(str, Enum):
    """Analytic CDF used by the solvers."""

    EXACT = "exact"
    FULL_CORRELATION = "full-correlation"
    MIN_FADING = "min-fading"
    MAX_FADING = "max-fading"


@dataclass
class CriticalDensityResult:
    lambda_eps: float
    epsilon: float
    iterations: int
    residual: float
    evaluator: str = Evaluator.EXACT.value
    n_antennas: int = 1


@dataclass
class SlopeFit:
    """Least-squares line through (log lam, log outage)."""
    slope: float
    intercept: float
    r_squared: float
    stderr: float = 0.0


@dataclass
class CriticalDensityRow:
    """One antenna count of the density-gain table. Missing estimates are None."""
    n_antennas: int
    lambda_exact: Optional[float]
    lambda_min_bound: float
    lambda_max_bound: float
    lambda_fc: float
    lambda_mc: Optional[float]
    gain_exact: Optional[float]
    gain_mc: Optional[float]


def _evaluator(value: Union[Evaluator, ModelKind, str]) -> Evaluator:
    try:
        return Evaluator(value.value if isinstance(value, Enum) else value)
    except ValueError:
        raise UnsupportedEvaluator(f"no analytic CDF for {value!r}") from None


def outage(T: float, p: SystemParams, evaluator: Union[Evaluator, str] = Evaluator.EXACT,
           cfg: Optional[QuadratureConfig] = None) -> float:
    """P(SIR < T) under the chosen evaluator."""
    evaluator = _evaluator(evaluator)
    if evaluator is Evaluator.EXACT:
        return quadrature.cdf_exact(T, p, cfg)
    model = ModelKind(evaluator.value)
    return bounds.cdf_bound(model, T, p)


# ============================================================================
# Critical density
# ============================================================================

def _check_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise NonPositive(f"target outage must lie in (0, 1), got {epsilon}")


def critical_density_single(epsilon: float, T: float, alpha: float, d: float) -> float:
    """-alpha log(1 - eps) / (2 pi^2 d^2 csc(2 pi/alpha) T^(2/alpha))."""
    _check_epsilon(epsilon)
    check_alpha(alpha)
    if not (T > 0.0 and d > 0.0):
        raise NonPositive(f"threshold and link distance must be > 0, got T={T}, d={d}")
    return (-alpha * math.log1p(-epsilon)
            / (2.0 * math.pi ** 2 * d * d * csc(2.0 * math.pi / alpha) * T ** (2.0 / alpha)))


def critical_density(epsilon: float, T: float, alpha: float, d: float, N: int,
                     evaluator: Union[Evaluator, str] = Evaluator.EXACT,
                     tol: float = CRITICAL_DENSITY_TOL,
                     cfg: Optional[QuadratureConfig] = None) -> CriticalDensityResult:
    """Largest density whose outage at T stays at ``epsilon``.

    Outage grows with density, so bisection on a bracket around
    ``4 * critical_density_single`` is guaranteed to converge once the
    bracket holds the root.
    """
    evaluator = _evaluator(evaluator)
    lam_single = critical_density_single(epsilon, T, alpha, d)
    base = SystemParams(lam=lam_single, alpha=alpha, d=d, n_antennas=N)
    validate_params(base)
    cfg = cfg or DEFAULT_QUADRATURE

    def residual(lam: float) -> float:
        return outage(T, base.with_density(lam), evaluator, cfg) - epsilon

    hi = BRACKET_FACTOR * lam_single
    for _ in range(BRACKET_MAX_EXPANSIONS):
        if residual(hi) >= 0.0:
            break
        logger.debug("expanding upper bracket beyond %.4g", hi)
        hi *= BRACKET_FACTOR
    else:
        raise BracketFailure(f"outage stays below {epsilon} up to lam={hi:g}")

    lo = lam_single
    for _ in range(BRACKET_MAX_EXPANSIONS):
        if residual(lo) <= 0.0:
            break
        lo /= BRACKET_FACTOR
    else:
        raise BracketFailure(f"outage stays above {epsilon} down to lam={lo:g}")

    root, info = bisect(residual, lo, hi, xtol=BISECTION_REL_XTOL * lo, rtol=BISECTION_REL_XTOL,
                        maxiter=BISECTION_MAX_ITER, full_output=True, disp=False)
    final = residual(root)
    if abs(final) > tol:
        raise NumericalError(
            f"critical density residual {final:.3g} exceeds {tol:g} after {info.iterations} iterations"
        )
    logger.debug("critical_density N=%d evaluator=%s -> %.8g (%d iterations)",
                 N, evaluator.value, root, info.iterations)
    return CriticalDensityResult(lambda_eps=float(root), epsilon=epsilon,
                                 iterations=int(info.iterations), residual=float(final),
                                 evaluator=evaluator.value, n_antennas=N)


def critical_density_gains(epsilon: float, T: float, alpha: float, d: float,
                           N_list: Sequence[int], mc: Optional[MonteCarloConfig] = None,
                           cfg: Optional[QuadratureConfig] = None) -> list[CriticalDensityRow]:
    """Density gain over a single antenna for every N.

    The exact density exists for N <= 2 only; every N gets the min/max
    bound interval, the FC-based density and, with ``mc``, a Monte Carlo
    estimate.
    """
    lam_single = critical_density_single(epsilon, T, alpha, d)
    rows = []
    for N in N_list:
        def solve(evaluator: Evaluator) -> float:
            return critical_density(epsilon, T, alpha, d, N, evaluator, cfg=cfg).lambda_eps

        if N == 1:
            lam_exact = lam_single
        else:
            lam_exact = solve(Evaluator.EXACT) if N == 2 else None
        lam_mc = (critical_density_mc(epsilon, T, alpha, d, N, ModelKind.EXACT_CORRELATED, mc)
                  if mc is not None else None)
        rows.append(CriticalDensityRow(
            n_antennas=N,
            lambda_exact=lam_exact,
            lambda_min_bound=solve(Evaluator.MIN_FADING),
            lambda_max_bound=solve(Evaluator.MAX_FADING),
            lambda_fc=solve(Evaluator.FULL_CORRELATION),
            lambda_mc=lam_mc,
            gain_exact=lam_exact / lam_single if lam_exact is not None else None,
            gain_mc=lam_mc / lam_single if lam_mc is not None else None,
        ))
    return rows


# ============================================================================
# Small-density slope
# ============================================================================

def a1_a2(T: float, alpha: float, d: float,
          cfg: Optional[QuadratureConfig] = None) -> tuple[float, float]:
    """Constants of the small-density expansion P(SIR <= T) ~ lam (A2 - A1)."""
    check_alpha(alpha)
    if not (T > 0.0 and d > 0.0):
        raise NonPositive(f"threshold and link distance must be > 0, got T={T}, d={d}")
    a1 = quadrature.a1_integral(T, alpha, d, cfg).value
    a2 = quadrature.a2_constant(T, alpha, d)
    if not a2 - a1 > 0.0:
        raise NumericalError(f"A2 - A1 = {a2 - a1:.3g} is not positive (T={T}, alpha={alpha})")
    return a1, a2


def default_lambda_grid() -> np.ndarray:
    return np.geomspace(SCDO_LAMBDA_MIN, SCDO_LAMBDA_MAX, SCDO_POINTS)


def scdo_slope(T: float, alpha: float, d: float, N: int = 2,
               lambda_grid: Optional[Sequence[float]] = None,
               model: Union[Evaluator, str] = Evaluator.EXACT,
               cfg: Optional[QuadratureConfig] = None) -> SlopeFit:
    """Slope of log P(SIR <= T) against log lam over a small-density grid."""
    grid = np.asarray(default_lambda_grid() if lambda_grid is None else lambda_grid, dtype=float)
    if grid.size < 2 or np.ptp(grid) == 0.0:
        raise DegenerateDesign("density grid needs at least two distinct points")
    model = _evaluator(model)
    if model not in (Evaluator.EXACT, Evaluator.FULL_CORRELATION):
        raise UnsupportedEvaluator(f"slope fit supports exact and full-correlation, got {model.value}")
    log_cdf = []
    for lam in grid:
        value = outage(T, SystemParams(lam=float(lam), alpha=alpha, d=d, n_antennas=N), model, cfg)
        if not value > 0.0:
            raise DivisionByNearZero(f"outage vanished at lam={lam:g}")
        log_cdf.append(math.log(value))
    fit = linregress(np.log(grid), log_cdf)
    return SlopeFit(slope=float(fit.slope), intercept=float(fit.intercept),
                    r_squared=float(min(1.0, fit.rvalue ** 2)), stderr=float(fit.stderr))


# ============================================================================
# Deviation ratios
# ============================================================================

def _ratio(numerator: float, denominator: float, what: str) -> float:
    if abs(denominator) < DELTA_FLOOR:
        raise DivisionByNearZero(f"{what}: denominator {denominator:.3g} below {DELTA_FLOOR:g}")
    return numerator / denominator


def delta_fc(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None) -> float:
    """P(SIR_FC <= T) / P(SIR <= T)."""
    exact = quadrature.cdf_exact(T, p, cfg)
    fc = bounds.cdf_fc(T, p)
    return _ratio(fc, exact, "delta_fc")


def delta_minmax(T: float, p: SystemParams) -> float:
    """P(SIR_max <= T) / P(SIR_min <= T), never below 1."""
    cdf_max = bounds.cdf_max(T, p)
    cdf_min = bounds.cdf_min(T, p)
    return _ratio(cdf_max, cdf_min, "delta_minmax")


def sqrt_fit(N_list: Sequence[float], gains: Sequence[float]) -> tuple[float, float]:
    """Least squares for gain = a sqrt(N) + b."""
    x = np.sqrt(np.asarray(N_list, dtype=float))
    y = np.asarray(gains, dtype=float)
    if x.size != y.size:
        raise DegenerateDesign(f"{x.size} antenna counts but {y.size} gains")
    if x.size < 2 or np.ptp(x) == 0.0:
        raise DegenerateDesign("antenna counts must take at least two distinct values")
    fit = linregress(x, y)
    return float(fit.slope), float(fit.intercept)


__all__ = [
    "Evaluator",
    "CriticalDensityResult",
    "CriticalDensityRow",
    "SlopeFit",
    "outage",
    "critical_density_single",
    "critical_density",
    "critical_density_gains",
    "a1_a2",
    "default_lambda_grid",
    "scdo_slope",
    "delta_fc",
    "delta_minmax",
    "sqrt_fit",
]
