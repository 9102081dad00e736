"""
Adaptive quadrature and the exact dual-antenna CCDF.

The engine is ``scipy.integrate.quad`` (QUADPACK Gauss-Kronrod with bisection
subdivision) wrapped so that every integral reports an error estimate, an
evaluation count and a convergence flag.

Change of variables for the r-integrals
---------------------------------------
With ``w = (d/r)**alpha`` both r-integrals of the dual-antenna CCDF become
``(d**2/alpha) * integral_0^inf w**(-b) * phi(w) dw`` with ``b = 2/alpha``.
Then ``u = w/(1+w)`` maps (0, inf) onto (0, 1) and gives

    integral_0^1 u**(-b) * (1-u)**(b-1) * phi(w) * (1+w) du,

an algebraic weight times a bounded function. The weight is handed to QUADPACK
(``weight='alg'``) so the endpoint singularities cost nothing.

Semi-infinite integrals passed to ``integrate_adaptive`` are mapped with
``t = (x-lo)/(1+x-lo)``; breakpoints are mapped the same way.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad
from scipy.special import gamma

from .config import (
    INNER_ABS_TOL,
    INNER_REL_TOL,
    MAX_SUBDIVISIONS,
    OUTER_REL_TOL,
    Z_SCAN_GROWTH,
    Z_SCAN_MAX_STEPS,
)
from .core import (
    Probability,
    SystemParams,
    check_probability,
    csc,
    interference_scale_c,
    single_antenna_ccdf,
    single_antenna_cdf,
    single_antenna_exponent,
    validate_params,
)
from .errors import (
    AlphaMismatch,
    AntennaCountMismatch,
    MaxSubdivisionsExceeded,
    NonFiniteIntegrand,
    NumericalError,
    UnsupportedEvaluator,
)

logger = logging.getLogger(__name__)


class QuadratureConfig(BaseModel):
    """Tolerances for ``integrate_adaptive`` and the CCDF evaluators.

    ``rel_tol``/``abs_tol`` apply to inner integrals, ``outer_rel_tol`` to the
    outer z-integral. With ``strict`` a non-converged integral raises
    ``MaxSubdivisionsExceeded`` instead of returning a flagged estimate.
    """

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=INNER_REL_TOL, gt=0)
    abs_tol: float = Field(default=INNER_ABS_TOL, gt=0)
    max_subdivisions: int = Field(default=MAX_SUBDIVISIONS, ge=1)
    outer_rel_tol: float = Field(default=OUTER_REL_TOL, gt=0)
    strict: bool = False

    def scaled(self, factor: float) -> "QuadratureConfig":
        """Same config with every tolerance multiplied by ``factor``."""
        return self.model_copy(update={
            "rel_tol": self.rel_tol * factor,
            "abs_tol": self.abs_tol * factor,
            "outer_rel_tol": self.outer_rel_tol * factor,
        })


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass
class IntegrationResult:
    """Value of an integral together with its quadrature bookkeeping."""
    value: float
    error_estimate: float
    evaluations: int
    subdivisions: int = 0
    converged: bool = True

    def __add__(self, other: "IntegrationResult") -> "IntegrationResult":
        return IntegrationResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
            subdivisions=self.subdivisions + other.subdivisions,
            converged=self.converged and other.converged,
        )


def _finite_guard(f: Callable[[float], float]) -> Callable[[float], float]:
    def guarded(x: float) -> float:
        y = f(x)
        if not math.isfinite(y):
            raise NonFiniteIntegrand(f"integrand returned {y!r} at x={x!r}")
        return y
    return guarded


def integrate_adaptive(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: Optional[QuadratureConfig] = None,
    *,
    breakpoints: Sequence[float] = (),
    endpoint_powers: Optional[tuple[float, float]] = None,
    rel_tol: Optional[float] = None,
) -> IntegrationResult:
    """Integrate ``f`` over ``(lo, hi)``; ``hi`` may be ``math.inf``.

    Args:
        f: scalar integrand.
        lo, hi: limits, ``lo`` finite.
        cfg: tolerances and subdivision limit.
        breakpoints: interior points where the integrand has kinks.
        endpoint_powers: ``(a, b)`` when the integrand is
            ``(x-lo)**a * (hi-x)**b * f(x)`` on a finite interval; ``f`` is
            then the smooth factor only.
        rel_tol: overrides ``cfg.rel_tol`` for this call.

    Returns:
        IntegrationResult; ``converged`` is False when QUADPACK flagged the
        estimate (subdivision limit, roundoff or slow convergence).
    """
    cfg = cfg or DEFAULT_QUADRATURE
    epsrel = cfg.rel_tol if rel_tol is None else rel_tol
    if hi == lo:
        return IntegrationResult(value=0.0, error_estimate=0.0, evaluations=0)
    if not math.isfinite(lo):
        raise NonFiniteIntegrand("lower limit must be finite")

    g = _finite_guard(f)
    a, b = lo, hi
    points = [x for x in breakpoints if lo < x < hi]

    if math.isinf(hi):
        if endpoint_powers is not None:
            raise NonFiniteIntegrand("endpoint_powers needs a finite interval")

        inner = g

        def mapped(t: float) -> float:
            one_minus = 1.0 - t
            return inner(lo + t / one_minus) / (one_minus * one_minus)

        g = mapped
        a, b = 0.0, 1.0
        points = [(x - lo) / (1.0 + x - lo) for x in points]

    limit = max(cfg.max_subdivisions, len(points) + 3)
    kwargs = dict(epsabs=cfg.abs_tol, epsrel=epsrel, limit=limit, full_output=1)
    if endpoint_powers is not None:
        out = quad(g, a, b, weight="alg", wvar=endpoint_powers, **kwargs)
    elif points:
        out = quad(g, a, b, points=sorted(points), **kwargs)
    else:
        out = quad(g, a, b, **kwargs)

    value, abserr, info = out[0], out[1], out[2]
    result = IntegrationResult(
        value=float(value),
        error_estimate=abs(float(abserr)),
        evaluations=int(info.get("neval", 0)),
        subdivisions=int(info.get("last", 0)),
        converged=len(out) == 3,
    )
    if not result.converged:
        message = out[3] if len(out) > 3 else "not converged"
        logger.warning(
            "quadrature flagged on (%g, %g): %s", lo, hi, str(message).splitlines()[0],
            extra={"value": result.value, "error_estimate": result.error_estimate},
        )
        if cfg.strict:
            raise MaxSubdivisionsExceeded(str(message), result)
    return result


# ============================================================================
# Exact dual-antenna building blocks
# ============================================================================

def _w_integral(psi: Callable[[float], float], beta: float, cfg: QuadratureConfig) -> IntegrationResult:
    """integral_0^inf w**-beta phi(w) dw, given psi(u) = phi(w)*(1+w) with w = u/(1-u)."""
    return integrate_adaptive(psi, 0.0, 1.0, cfg, endpoint_powers=(-beta, beta - 1.0))


def _c_exponent_integral(z: float, t: float, beta: float, cfg: QuadratureConfig) -> float:
    if z + t == 0.0:
        return 0.0

    def psi(u: float) -> float:
        if u >= 1.0:
            return 1.0
        w = u / (1.0 - u)
        return (z + t + z * t * w) * (1.0 + w) / ((1.0 + z * w) * (1.0 + t * w))

    return _w_integral(psi, beta, cfg).value


def _inner_integral(z: float, t: float, beta: float, cfg: QuadratureConfig) -> float:
    if z == 0.0 and t == 0.0:
        raise NonFiniteIntegrand("inner integral diverges at z = 0, T = 0")

    def psi(u: float) -> float:
        if u >= 1.0:
            return 0.0 if z > 0.0 else 1.0 / t
        w = u / (1.0 - u)
        return (1.0 + w) / ((1.0 + z * w) ** 2 * (1.0 + t * w))

    return _w_integral(psi, beta, cfg).value


def c_factor(z: float, T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None,
             *, fast_path: bool = True) -> float:
    """C(z, T) = exp{-2 pi lam integral_0^inf r (1 - 1/((1+z(d/r)^a)(1+(d/r)^a (T-z)^+))) dr}.

    For z >= T the integral is closed form: C = exp(-c d**2 z**(2/alpha)).
    """
    cfg = cfg or DEFAULT_QUADRATURE
    beta = 2.0 / p.alpha
    t = max(T - z, 0.0)
    if fast_path and t == 0.0:
        return math.exp(-interference_scale_c(p.lam, p.alpha) * p.d ** 2 * z ** beta)
    integral = _c_exponent_integral(z, t, beta, cfg)
    return math.exp(-2.0 * math.pi * p.lam * p.d ** 2 / p.alpha * integral)


def inner_r_integral(z: float, T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None,
                     *, fast_path: bool = True) -> float:
    """integral_0^inf r^(1-a) d^a / (1+z r^-a d^a)^2 / (1 + r^-a d^a (T-z)^+) dr.

    For z > T this is (d**2/alpha) z**(2/alpha-1) Gamma(1-2/alpha) Gamma(1+2/alpha).
    """
    cfg = cfg or DEFAULT_QUADRATURE
    beta = 2.0 / p.alpha
    t = max(T - z, 0.0)
    if fast_path and t == 0.0 and z > 0.0:
        return p.d ** 2 / p.alpha * z ** (beta - 1.0) * gamma(1.0 - beta) * gamma(1.0 + beta)
    return p.d ** 2 / p.alpha * _inner_integral(z, t, beta, cfg)


def _check_n2(p: SystemParams) -> None:
    validate_params(p)
    if p.n_antennas != 2:
        raise AntennaCountMismatch(f"exact CCDF is available for N=2 only, got N={p.n_antennas}")


def _outer_integrand(T: float, p: SystemParams, cfg: QuadratureConfig) -> Callable[[float], float]:
    scale = 2.0 * math.pi * p.lam

    def integrand(z: float) -> float:
        return scale * c_factor(z, T, p, cfg) * inner_r_integral(z, T, p, cfg)

    return integrand


def _numeric_tail(integrand: Callable[[float], float], T: float, p: SystemParams,
                  cfg: QuadratureConfig) -> IntegrationResult:
    """Outer integral over [T, z_max] in geometric panels, plus the tail bound.

    z_max is the first scan point where the integrand drops below ``abs_tol``.
    Beyond z_max the integral equals exp(-c d**2 z_max**(2/alpha)), which is
    added to the error estimate.
    """
    edges = [T]
    z = T
    for _ in range(Z_SCAN_MAX_STEPS):
        z *= Z_SCAN_GROWTH
        edges.append(z)
        if integrand(z) <= cfg.abs_tol:
            break
    else:
        raise NumericalError(f"outer integrand did not decay below {cfg.abs_tol} by z={z:g}")

    total = IntegrationResult(value=0.0, error_estimate=0.0, evaluations=0)
    for left, right in zip(edges[:-1], edges[1:]):
        total = total + integrate_adaptive(integrand, left, right, cfg, rel_tol=cfg.outer_rel_tol)
    tail_bound = math.exp(-interference_scale_c(p.lam, p.alpha) * p.d ** 2 * edges[-1] ** (2.0 / p.alpha))
    total.error_estimate += tail_bound
    logger.debug("numeric z-tail on [%g, %g] in %d panels", T, edges[-1], len(edges) - 1)
    return total


def _head_general(T: float, p: SystemParams, cfg: QuadratureConfig) -> IntegrationResult:
    """Outer integral over [0, T], split at T/2."""
    return integrate_adaptive(_outer_integrand(T, p, cfg), 0.0, T, cfg,
                              breakpoints=(T / 2.0,), rel_tol=cfg.outer_rel_tol)


def _closed_tail(T: float, p: SystemParams) -> IntegrationResult:
    # integral_T^inf of the outer integrand is exactly the single-antenna CCDF at T
    return IntegrationResult(value=single_antenna_ccdf(T, p), error_estimate=0.0, evaluations=0)


def ccdf_exact_n2_result(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None,
                         *, analytic_tail: bool = True) -> IntegrationResult:
    """Dual-antenna CCDF with its accumulated error estimate."""
    cfg = cfg or DEFAULT_QUADRATURE
    _check_n2(p)
    if T <= 0.0:
        return IntegrationResult(value=1.0, error_estimate=0.0, evaluations=0)
    head = _head_general(T, p, cfg)
    if analytic_tail:
        tail = _closed_tail(T, p)
    else:
        tail = _numeric_tail(_outer_integrand(T, p, cfg), T, p, cfg)
    total = head + tail
    logger.debug("ccdf_exact_n2 T=%g value=%.12g err=%.3g evals=%d",
                 T, total.value, total.error_estimate, total.evaluations)
    return total


def ccdf_exact_n2(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None,
                  *, analytic_tail: bool = True) -> Probability:
    """P(SIR >= T) for dual-antenna MRC in a Poisson field."""
    result = ccdf_exact_n2_result(T, p, cfg, analytic_tail=analytic_tail)
    return check_probability(result.value, "exact N=2 CCDF")


def cdf_exact_n2(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None) -> Probability:
    """P(SIR < T) without the cancellation of ``1 - ccdf`` at tiny outage."""
    cfg = cfg or DEFAULT_QUADRATURE
    _check_n2(p)
    if T <= 0.0:
        return 0.0
    head = _head_general(T, p, cfg)
    return check_probability(single_antenna_cdf(T, p) - head.value, "exact N=2 CDF")


def ccdf_without_auxiliary_branch(T: float, p: SystemParams,
                                  cfg: Optional[QuadratureConfig] = None) -> Probability:
    """Dual-antenna machinery with the second branch forced to zero.

    Dropping the auxiliary branch is a point mass at z = 0, leaving C(0, T),
    which must equal the single-antenna CCDF.
    """
    validate_params(p)
    return check_probability(c_factor(0.0, T, p, cfg, fast_path=False), "C(0, T)")


# ============================================================================
# alpha = 4 closed forms
# ============================================================================

# Taylor coefficients in delta = (w - z)/z around the removable singularity w = z.
_FRACTION_SERIES = (1.5, 0.375, -0.0625)
_WEIGHT_SERIES = (0.75, -0.125, 0.046875)
_SERIES_RADIUS = 1e-3


def _check_alpha4(p: SystemParams) -> None:
    if p.alpha != 4.0:
        raise AlphaMismatch(f"closed form needs alpha = 4, got {p.alpha}")


def _series(coeffs: Sequence[float], delta: float) -> float:
    return coeffs[0] + delta * (coeffs[1] + delta * coeffs[2])


def alpha4_exponent_fraction(z: float, T: float) -> float:
    """(z^1.5 - w^1.5)/(z - w) with w = (T-z)^+, limit 1.5 sqrt(z) at w = z."""
    w = max(T - z, 0.0)
    if z > 0.0 and abs(w - z) <= _SERIES_RADIUS * z:
        return math.sqrt(z) * _series(_FRACTION_SERIES, (w - z) / z)
    return (z ** 1.5 - w ** 1.5) / (z - w)


def alpha4_weight(z: float, T: float) -> float:
    """(z^1.5 - 3 sqrt(z) w + 2 w^1.5)/(z - w)^2 with w = (T-z)^+, limit 3/(4 sqrt(z))."""
    w = max(T - z, 0.0)
    if z > 0.0 and abs(w - z) <= _SERIES_RADIUS * z:
        return _series(_WEIGHT_SERIES, (w - z) / z) / math.sqrt(z)
    return (z ** 1.5 - 3.0 * math.sqrt(z) * w + 2.0 * w ** 1.5) / (z - w) ** 2


def c_factor_alpha4(z: float, T: float, p: SystemParams) -> float:
    """C_4(z, T) = exp(-(pi^2/2) lam d^2 (z^1.5 - w^1.5)/(z - w))."""
    _check_alpha4(p)
    if z == 0.0 and T == 0.0:
        return 1.0
    return math.exp(-0.5 * math.pi ** 2 * p.lam * p.d ** 2 * alpha4_exponent_fraction(z, T))


def _head_alpha4(T: float, p: SystemParams, cfg: QuadratureConfig) -> IntegrationResult:
    scale = 0.25 * math.pi ** 2 * p.d ** 2 * p.lam

    def integrand(z: float) -> float:
        return scale * c_factor_alpha4(z, T, p) * alpha4_weight(z, T)

    return integrate_adaptive(integrand, 0.0, T, cfg, breakpoints=(T / 2.0,),
                              rel_tol=cfg.outer_rel_tol)


def ccdf_exact_n2_alpha4_result(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None,
                                *, analytic_tail: bool = True) -> IntegrationResult:
    cfg = cfg or DEFAULT_QUADRATURE
    _check_n2(p)
    _check_alpha4(p)
    if T <= 0.0:
        return IntegrationResult(value=1.0, error_estimate=0.0, evaluations=0)
    head = _head_alpha4(T, p, cfg)
    if analytic_tail:
        return head + _closed_tail(T, p)
    scale = 0.25 * math.pi ** 2 * p.d ** 2 * p.lam

    def integrand(z: float) -> float:
        return scale * c_factor_alpha4(z, T, p) * alpha4_weight(z, T)

    return head + _numeric_tail(integrand, T, p, cfg)


def ccdf_exact_n2_alpha4(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None,
                         *, analytic_tail: bool = True) -> Probability:
    """Dual-antenna CCDF for alpha = 4 with a single outer quadrature."""
    result = ccdf_exact_n2_alpha4_result(T, p, cfg, analytic_tail=analytic_tail)
    return check_probability(result.value, "exact N=2 alpha=4 CCDF")


def cdf_exact_n2_alpha4(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None) -> Probability:
    cfg = cfg or DEFAULT_QUADRATURE
    _check_n2(p)
    _check_alpha4(p)
    if T <= 0.0:
        return 0.0
    return check_probability(single_antenna_cdf(T, p) - _head_alpha4(T, p, cfg).value,
                             "exact N=2 alpha=4 CDF")


# ============================================================================
# Dispatch
# ============================================================================

def ccdf_exact(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None) -> Probability:
    """Exact CCDF where one exists: N=1 closed form, N=2 quadrature."""
    validate_params(p)
    if p.n_antennas == 1:
        return single_antenna_ccdf(T, p)
    if p.n_antennas == 2:
        if p.alpha == 4.0:
            return ccdf_exact_n2_alpha4(T, p, cfg)
        return ccdf_exact_n2(T, p, cfg)
    raise UnsupportedEvaluator(f"no exact CCDF for N={p.n_antennas}")


def cdf_exact(T: float, p: SystemParams, cfg: Optional[QuadratureConfig] = None) -> Probability:
    validate_params(p)
    if p.n_antennas == 1:
        return single_antenna_cdf(T, p)
    if p.n_antennas == 2:
        if p.alpha == 4.0:
            return cdf_exact_n2_alpha4(T, p, cfg)
        return cdf_exact_n2(T, p, cfg)
    raise UnsupportedEvaluator(f"no exact CDF for N={p.n_antennas}")


def a2_constant(T: float, alpha: float, d: float) -> float:
    """(2/alpha) pi^2 d^2 T^(2/alpha) csc(2 pi/alpha): outage slope of the z > T part."""
    return (2.0 / alpha) * math.pi ** 2 * d ** 2 * T ** (2.0 / alpha) * csc(2.0 * math.pi / alpha)


def a1_integral(T: float, alpha: float, d: float, cfg: Optional[QuadratureConfig] = None) -> IntegrationResult:
    """2 pi integral_0^T inner_r_integral(z, T) dz (the z < T part at vanishing density)."""
    cfg = cfg or DEFAULT_QUADRATURE
    p = SystemParams(lam=1.0, alpha=alpha, d=d, n_antennas=2)

    def integrand(z: float) -> float:
        return 2.0 * math.pi * inner_r_integral(z, T, p, cfg)

    return integrate_adaptive(integrand, 0.0, T, cfg, breakpoints=(T / 2.0,),
                              rel_tol=cfg.outer_rel_tol)


__all__ = [
    "QuadratureConfig",
    "IntegrationResult",
    "DEFAULT_QUADRATURE",
    "integrate_adaptive",
    "c_factor",
    "c_factor_alpha4",
    "inner_r_integral",
    "ccdf_exact_n2",
    "ccdf_exact_n2_result",
    "cdf_exact_n2",
    "ccdf_exact_n2_alpha4",
    "ccdf_exact_n2_alpha4_result",
    "cdf_exact_n2_alpha4",
    "ccdf_without_auxiliary_branch",
    "ccdf_exact",
    "cdf_exact",
    "alpha4_exponent_fraction",
    "alpha4_weight",
    "a1_integral",
    "a2_constant",
    "single_antenna_exponent",
]
