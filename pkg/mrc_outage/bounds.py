"""
Closed forms and bounds built on the Laplace transform of the interference.

For a Poisson field with Rayleigh fading the interference Laplace transform
is the stretched exponential ``exp(-c * s**beta)`` with ``beta = 2/alpha``.
The CCDF of ``(g_1 + ... + g_N) / (U d^alpha)`` for i.i.d. unit exponential
``g_n`` is a finite sum over the first N derivatives of that transform:

    sum_{k<N} (-1)^k s^k / k! * d^k/ds^k L(s)

Derivatives come from the complete Bell polynomial recurrence
``B_{k+1} = sum_j C(k, j) B_{k-j} d_{j+1}`` applied to the derivatives
``d_j`` of the exponent. Every term has sign ``(-1)^k`` so the sum never
cancels.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from scipy.special import comb, gamma, poch

from .config import DELTA_FLOOR, HMAX_ALTERNATING_MAX_N
from .core import (
    ModelKind,
    Probability,
    SystemParams,
    check_alpha,
    check_probability,
    csc,
    interference_scale_c,
    validate_params,
)
from .quadrature import QuadratureConfig, integrate_adaptive
from .errors import (
    AntennaCountMismatch,
    DivisionByNearZero,
    NonPositive,
    OutOfUnitInterval,
    UnsupportedEvaluator,
    ZeroAntennas,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LaplaceSpec:
    """``exp(-c_scale * s**beta)``."""

    c_scale: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise NonPositive(f"beta must lie in (0, 1), got {self.beta}")
        if self.c_scale < 0.0:
            raise NonPositive(f"c_scale must be >= 0, got {self.c_scale}")


@dataclass
class DerivativeTable:
    """Derivatives ``d^k L / ds^k`` for k = 0..K-1 at the point ``s``.

    ``exponent`` is ``c * s**beta`` when the table was built from a
    stretched exponential; the CDF uses it to avoid ``1 - L(s)``.
    """

    s: float
    values: list[float] = field(default_factory=list)
    exponent: Optional[float] = None

    def check_alternating(self) -> None:
        for k, value in enumerate(self.values):
            if (-1) ** k * value < 0.0:
                raise OutOfUnitInterval(f"derivative {k} has the wrong sign: {value!r}")


def _check_n(n_antennas: int) -> int:
    if int(n_antennas) != n_antennas or n_antennas < 1:
        raise ZeroAntennas(f"antenna count must be a positive integer, got {n_antennas}")
    return int(n_antennas)


def exp_power_derivatives(spec: LaplaceSpec, s: float, K: int) -> DerivativeTable:
    """First K derivatives of ``exp(-c s^beta)`` at ``s`` (Faa di Bruno)."""
    if not s > 0.0:
        raise NonPositive(f"evaluation point must be > 0, got {s}")
    K = _check_n(K)
    c, beta = spec.c_scale, spec.beta
    # d_j = j-th derivative of -c s^beta
    exponent_derivs = [-c * poch(beta - j + 1.0, j) * s ** (beta - j) for j in range(1, K)]
    bell = [1.0]
    for k in range(K - 1):
        bell.append(math.fsum(
            comb(k, j, exact=True) * bell[k - j] * exponent_derivs[j] for j in range(k + 1)
        ))
    exponent = c * s ** beta
    base = math.exp(-exponent)
    table = DerivativeTable(s=s, values=[base * b for b in bell], exponent=exponent)
    table.check_alternating()
    return table


def _series_terms(table: DerivativeTable, N: int) -> list[float]:
    N = _check_n(N)
    if len(table.values) < N:
        raise OutOfUnitInterval(f"table holds {len(table.values)} derivatives, {N} needed")
    s = table.s
    return [(-1) ** k * s ** k / math.factorial(k) * table.values[k] for k in range(N)]


def ccdf_from_laplace(table: DerivativeTable, N: int) -> Probability:
    return check_probability(math.fsum(_series_terms(table, N)), "Laplace-derivative CCDF")


def cdf_from_laplace(table: DerivativeTable, N: int) -> Probability:
    """``1 - ccdf_from_laplace`` without cancellation at small outage.

    The k = 0 term is replaced by ``-expm1(-c s^beta)``; the remaining terms
    are all positive, so the subtraction loses at most a factor 1/D(alpha, N).
    """
    terms = _series_terms(table, N)
    if table.exponent is None:
        return check_probability(1.0 - math.fsum(terms), "Laplace-derivative CDF")
    head = -math.expm1(-table.exponent)
    return check_probability(head - math.fsum(terms[1:]), "Laplace-derivative CDF")


def _laplace_ccdf(c_scale: float, beta: float, s: float, N: int) -> Probability:
    if s == 0.0:
        return 1.0
    return ccdf_from_laplace(exp_power_derivatives(LaplaceSpec(c_scale, beta), s, N), N)


def _laplace_cdf(c_scale: float, beta: float, s: float, N: int) -> Probability:
    if s == 0.0:
        return 0.0
    return cdf_from_laplace(exp_power_derivatives(LaplaceSpec(c_scale, beta), s, N), N)


def _check_threshold(T: float, p: SystemParams) -> None:
    validate_params(p)
    if T < 0.0:
        raise NonPositive(f"threshold must be >= 0, got {T}")


def _fc_args(T: float, p: SystemParams) -> tuple[float, float, float, int]:
    _check_threshold(T, p)
    return (interference_scale_c(p.lam, p.alpha), 2.0 / p.alpha,
            T * p.d ** p.alpha, p.n_antennas)


def ccdf_fc(T: float, p: SystemParams) -> Probability:
    """CCDF when every antenna sees the same fading from each interferer."""
    return _laplace_ccdf(*_fc_args(T, p))


def cdf_fc(T: float, p: SystemParams) -> Probability:
    return _laplace_cdf(*_fc_args(T, p))


def _hmax_density_moment(N: int, beta: float) -> float:
    def integrand(h: float) -> float:
        if h == 0.0:
            return 0.0
        return h ** beta * N * (-math.expm1(-h)) ** (N - 1) * math.exp(-h)

    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-14)
    return integrate_adaptive(integrand, 0.0, math.inf, cfg,
                              breakpoints=(math.log(N),)).value


def hmax_moment(N: int, alpha: float) -> float:
    """E[h_max^(2/alpha)] for the maximum of N unit exponentials."""
    N = _check_n(N)
    beta = 2.0 / check_alpha(alpha)
    if N > HMAX_ALTERNATING_MAX_N:
        return _hmax_density_moment(N, beta)
    total = math.fsum(
        comb(N - 1, j, exact=True) * (-1) ** j * (j + 1.0) ** (-1.0 - beta) for j in range(N)
    )
    return N * gamma(1.0 + beta) * total


def _min_args(T: float, p: SystemParams) -> tuple[float, float, float, int]:
    _check_threshold(T, p)
    N = p.n_antennas
    return interference_scale_c(p.lam, p.alpha), 2.0 / p.alpha, T / N * p.d ** p.alpha, N


def _max_args(T: float, p: SystemParams) -> tuple[float, float, float, int]:
    _check_threshold(T, p)
    beta = 2.0 / p.alpha
    c_max = p.lam * math.pi * gamma(1.0 - beta) * hmax_moment(p.n_antennas, p.alpha)
    return c_max, beta, T * p.d ** p.alpha, p.n_antennas


def ccdf_min(T: float, p: SystemParams) -> Probability:
    """Upper bound on the CCDF: every interferer keeps its weakest gain."""
    return _laplace_ccdf(*_min_args(T, p))


def cdf_min(T: float, p: SystemParams) -> Probability:
    return _laplace_cdf(*_min_args(T, p))


def ccdf_max(T: float, p: SystemParams) -> Probability:
    """Lower bound on the CCDF: every interferer keeps its strongest gain."""
    return _laplace_ccdf(*_max_args(T, p))


def cdf_max(T: float, p: SystemParams) -> Probability:
    return _laplace_cdf(*_max_args(T, p))


# ============================================================================
# N = 2 and N = 4 closed forms
# ============================================================================

def minmax_constants_n2(alpha: float, lam: float) -> tuple[float, float]:
    """(c1, c2) of the dual-antenna min/max bounds, without the d**2 factor."""
    beta = 2.0 / check_alpha(alpha)
    unit = math.pi ** 2 * lam * csc(2.0 * math.pi / alpha) / alpha
    return 2.0 ** (1.0 - beta) * unit, (4.0 - 2.0 ** (1.0 - beta)) * unit


def minmax_constants_n4(alpha: float, lam: float) -> tuple[float, float]:
    beta = 2.0 / check_alpha(alpha)
    unit = math.pi ** 2 * lam * csc(2.0 * math.pi / alpha) / alpha
    c1 = 2.0 ** (1.0 - 2.0 * beta) * unit
    c2 = (8.0 - 3.0 * 2.0 ** (2.0 - beta) - 2.0 ** (1.0 - 2.0 * beta) + 8.0 * 3.0 ** (-beta)) * unit
    return c1, c2


def _closed_n2(x: float, alpha: float) -> float:
    return math.exp(-x) * (alpha + 2.0 * x) / alpha


def _closed_n4(x: float, alpha: float) -> float:
    a = alpha
    poly = 3 * a ** 3 + 11 * a ** 2 * x + 12 * a * x * (x - 1.0) + 4 * x * (1.0 - 3.0 * x + x * x)
    return math.exp(-x) * poly / (3.0 * a ** 3)


def _closed_pair(T: float, p: SystemParams, n_expected: int, constants, closed) -> tuple[Probability, Probability]:
    validate_params(p)
    if p.n_antennas != n_expected:
        raise AntennaCountMismatch(f"closed form needs N={n_expected}, got N={p.n_antennas}")
    if T < 0.0:
        raise NonPositive(f"threshold must be >= 0, got {T}")
    c1, c2 = constants(p.alpha, p.lam)
    scale = p.d ** 2 * T ** (2.0 / p.alpha)
    lower = check_probability(closed(c2 * scale, p.alpha), "max-fading closed form")
    upper = check_probability(closed(c1 * scale, p.alpha), "min-fading closed form")
    return lower, upper


def minmax_closed_n2(T: float, p: SystemParams) -> tuple[Probability, Probability]:
    """(lower, upper) = (ccdf_max, ccdf_min) for N=2 in closed form."""
    return _closed_pair(T, p, 2, minmax_constants_n2, _closed_n2)


def minmax_closed_n4(T: float, p: SystemParams) -> tuple[Probability, Probability]:
    """(lower, upper) = (ccdf_max, ccdf_min) for N=4 in closed form.

    The constants multiply d**2 T**(2/alpha), matching the general path.
    """
    return _closed_pair(T, p, 4, minmax_constants_n4, _closed_n4)


# ============================================================================
# Small-density asymptotics
# ============================================================================

def pochhammer_sum(alpha: float, N: int) -> float:
    """D(alpha, N) = sum_{k<N} (-1)^k / k! * (1 + 2/alpha - k)_k."""
    beta = 2.0 / check_alpha(alpha)
    N = _check_n(N)
    return math.fsum((-1) ** k / math.factorial(k) * poch(1.0 + beta - k, k) for k in range(N))


def small_density_scale(T: float, p: SystemParams) -> float:
    """c' = pi lam d^2 T^(2/alpha) Gamma(1 - 2/alpha)."""
    validate_params(p)
    return math.pi * p.lam * p.d ** 2 * T ** (2.0 / p.alpha) * gamma(1.0 - 2.0 / p.alpha)


def asymptotic_cdf_slope_bounds(alpha: float, N: int) -> tuple[float, float]:
    """Bounds on lim P(SIR <= T) / c' as c' -> 0."""
    beta = 2.0 / check_alpha(alpha)
    N = _check_n(N)
    D = pochhammer_sum(alpha, N)
    lower = N ** (-beta) * gamma(1.0 + beta) * D
    upper = hmax_moment(N, alpha) * D
    return lower, upper


def asymptotic_delta_minmax(alpha: float, N: int) -> float:
    lower, upper = asymptotic_cdf_slope_bounds(alpha, N)
    if abs(lower) < DELTA_FLOOR:
        raise DivisionByNearZero(f"lower slope coefficient vanishes for alpha={alpha}, N={N}")
    return upper / lower


_BOUND_ARGS = {
    ModelKind.FULL_CORRELATION: _fc_args,
    ModelKind.MIN_FADING: _min_args,
    ModelKind.MAX_FADING: _max_args,
}


def _bound_args(model: Union[ModelKind, str], T: float, p: SystemParams):
    try:
        model = ModelKind(model)
    except ValueError:
        raise UnsupportedEvaluator(f"unknown model {model!r}") from None
    if model not in _BOUND_ARGS:
        raise UnsupportedEvaluator(f"no closed-form CCDF for model {model.value!r}")
    return _BOUND_ARGS[model](T, p)


def ccdf_bound(model: Union[ModelKind, str], T: float, p: SystemParams) -> Probability:
    """Analytic CCDF of a model that has one outside the exact evaluators."""
    return _laplace_ccdf(*_bound_args(model, T, p))


def cdf_bound(model: Union[ModelKind, str], T: float, p: SystemParams) -> Probability:
    """Outage of the same models, accurate when it is tiny."""
    return _laplace_cdf(*_bound_args(model, T, p))


__all__ = [
    "LaplaceSpec",
    "DerivativeTable",
    "exp_power_derivatives",
    "ccdf_from_laplace",
    "cdf_from_laplace",
    "ccdf_fc",
    "cdf_fc",
    "hmax_moment",
    "ccdf_min",
    "cdf_min",
    "ccdf_max",
    "cdf_max",
    "minmax_constants_n2",
    "minmax_constants_n4",
    "minmax_closed_n2",
    "minmax_closed_n4",
    "pochhammer_sum",
    "small_density_scale",
    "asymptotic_cdf_slope_bounds",
    "asymptotic_delta_minmax",
    "ccdf_bound",
    "cdf_bound",
]
