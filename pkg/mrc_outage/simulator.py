"""
Monte Carlo oracle for the post-combiner SIR.

Interferers are a Poisson field inside a disk of radius R around the
receiver. Only distances matter, so a field is a vector of distances. The
vectorised path draws ``block_size`` fields at once; block ``b`` always uses
the stream ``SeedSequence(seed, spawn_key=(b,))``, so results depend on the
seed and block size only, never on how many workers ran the blocks.

Draw order inside a block (kept identical across the coupled models so that
MinFading <= ExactCorrelated <= MaxFading holds sample by sample):
  1. point counts, 2. squared distances, 3. N rows of interferer gains,
  4. N rows of desired-link gains.
NoCorrelation repeats steps 1-3 once per antenna with a fresh field.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat
from scipy.stats import binomtest

from .config import (
    CONFIDENCE_LEVEL,
    DEFAULT_BLOCK_SIZE,
    DEFAULT_MAX_MEAN_POINTS,
    DEFAULT_NUM_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TAIL_FRAC,
    WINDOW_FLOOR_FACTOR,
)
from .core import ModelKind, SystemParams, check_alpha, db_to_linear, interference_scale_c
from .errors import ConfigError, EmptyField, NonPositive, ZeroAntennas

logger = logging.getLogger(__name__)


class MonteCarloConfig(BaseModel):
    """Sampling settings. ``window_radius="auto"`` derives R from ``tail_frac``."""

    model_config = ConfigDict(frozen=True)

    num_samples: int = Field(default=DEFAULT_NUM_SAMPLES, ge=1)
    window_radius: Union[PositiveFloat, Literal["auto"]] = "auto"
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2 ** 64)
    tail_frac: float = Field(default=DEFAULT_TAIL_FRAC, gt=0, lt=1)
    noise_snr_db: Optional[float] = None
    block_size: int = Field(default=DEFAULT_BLOCK_SIZE, ge=1)
    workers: int = Field(default=1, ge=1)
    tail_compensation: bool = True
    max_mean_points: float = Field(default=DEFAULT_MAX_MEAN_POINTS, gt=0)


@dataclass
class CcdfEstimate:
    """Empirical outage ``P(SIR < threshold)`` with a Wilson interval."""
    threshold: float
    point: float
    ci_low: float
    ci_high: float
    n: int

    @property
    def ccdf(self) -> float:
        return 1.0 - self.point


@dataclass
class InterfererField:
    """Distances of the interferers of one realisation.

    ``radius`` and ``density`` are kept so that a model which needs an
    independent field per antenna can draw it from the same law.
    """
    distances: np.ndarray
    radius: float
    density: float

    def __len__(self) -> int:
        return int(self.distances.size)


def _check_sim_params(p: SystemParams) -> SystemParams:
    # lam = 0 is a valid (empty) field for the simulator
    check_alpha(p.alpha)
    if p.lam < 0.0 or not math.isfinite(p.lam):
        raise NonPositive(f"density must be >= 0, got {p.lam}")
    if not p.d > 0.0:
        raise NonPositive(f"link distance must be > 0, got {p.d}")
    if int(p.n_antennas) != p.n_antennas or p.n_antennas < 1:
        raise ZeroAntennas(f"antenna count must be a positive integer, got {p.n_antennas}")
    return p


# ============================================================================
# Single realisations
# ============================================================================

def sample_field(lam: float, R: float, rng: np.random.Generator) -> InterfererField:
    """Poisson(lam pi R^2) points uniform in the disk of radius R."""
    if not R > 0.0:
        raise NonPositive(f"window radius must be > 0, got {R}")
    if lam < 0.0:
        raise NonPositive(f"density must be >= 0, got {lam}")
    count = rng.poisson(lam * math.pi * R * R)
    # 1 - U lies in (0, 1], so no interferer sits on the receiver
    distances = R * np.sqrt(1.0 - rng.random(count))
    return InterfererField(distances=distances, radius=R, density=lam)


def _branch_interference(p: SystemParams, model: ModelKind, field: InterfererField,
                         rng: np.random.Generator) -> np.ndarray:
    N = p.n_antennas
    if model is ModelKind.NO_CORRELATION:
        sums = np.empty(N)
        for n in range(N):
            branch_field = field if n == 0 else sample_field(field.density, field.radius, rng)
            path = branch_field.distances ** -p.alpha
            sums[n] = rng.exponential(size=path.size) @ path
        return sums
    path = field.distances ** -p.alpha
    h = rng.exponential(size=(N, path.size))
    if model is ModelKind.EXACT_CORRELATED:
        return h @ path
    if model is ModelKind.FULL_CORRELATION:
        gains = h[0]
    elif model is ModelKind.MIN_FADING:
        gains = h.min(axis=0)
    else:
        gains = h.max(axis=0)
    return np.full(N, gains @ path)


def _combine(p: SystemParams, interference: np.ndarray, rng: np.random.Generator) -> float:
    g = rng.exponential(size=p.n_antennas)
    return float(np.sum(g * p.d ** -p.alpha / interference))


def sample_sir(p: SystemParams, model: Union[ModelKind, str], field: InterfererField,
               rng: np.random.Generator) -> float:
    """Post-combiner SIR sum_n g_n d^-alpha / I_n for one field."""
    _check_sim_params(p)
    interference = _branch_interference(p, ModelKind(model), field, rng)
    if np.any(interference <= 0.0):
        raise EmptyField("a branch sees no interference and there is no noise")
    return _combine(p, interference, rng)


def sample_sinr(p: SystemParams, model: Union[ModelKind, str], field: InterfererField,
                rng: np.random.Generator, noise_power: float) -> float:
    """Post-combiner SINR sum_n g_n d^-alpha / (I_n + W)."""
    if not noise_power > 0.0:
        raise NonPositive(f"noise power must be > 0, got {noise_power}")
    _check_sim_params(p)
    interference = _branch_interference(p, ModelKind(model), field, rng)
    return _combine(p, interference + noise_power, rng)


# ============================================================================
# Window and noise
# ============================================================================

def noise_power_for(p: SystemParams, mc: MonteCarloConfig) -> float:
    """W = d^-alpha / snr (per-branch mean SNR with unit-mean fading); 0 without noise."""
    if mc.noise_snr_db is None:
        return 0.0
    return p.d ** -p.alpha / db_to_linear(mc.noise_snr_db)


def mean_interferer_gain(model: ModelKind, N: int) -> float:
    """E[h] of the per-interferer gain each branch sees."""
    if model is ModelKind.MIN_FADING:
        return 1.0 / N
    if model is ModelKind.MAX_FADING:
        return math.fsum(1.0 / k for k in range(1, N + 1))
    return 1.0


def tail_interference_mean(p: SystemParams, model: ModelKind, radius: float) -> float:
    """Mean interference from beyond the window: E[h] 2 pi lam R^(2-alpha)/(alpha-2)."""
    return (mean_interferer_gain(model, p.n_antennas) * 2.0 * math.pi * p.lam
            * radius ** (2.0 - p.alpha) / (p.alpha - 2.0))


def auto_window_radius(p: SystemParams, T_max: Optional[float],
                       mc: MonteCarloConfig) -> tuple[float, bool]:
    """Window radius and whether the point-count cap shrank it.

    The criterion radius makes the mean interference from beyond R at most
    ``tail_frac * d^-alpha / T_max``. The point-count cap
    (``max_mean_points``) may cut the criterion back, never below the floor
    of 50 d: ``max(50 d, min(criterion, cap))``.
    """
    _check_sim_params(p)
    if mc.window_radius != "auto":
        return float(mc.window_radius), False
    floor = WINDOW_FLOOR_FACTOR * p.d
    radius = floor
    if T_max is not None and T_max > 0.0 and p.lam > 0.0:
        criterion = (2.0 * math.pi * p.lam * p.d ** p.alpha * T_max
                     / ((p.alpha - 2.0) * mc.tail_frac)) ** (1.0 / (p.alpha - 2.0))
        radius = max(radius, criterion)
    if p.lam <= 0.0:
        return radius, False
    extra = {"lam": p.lam, "alpha": p.alpha, "d": p.d}
    cap = math.sqrt(mc.max_mean_points / (math.pi * p.lam))
    if floor > cap:
        logger.warning(
            "window floor %.4g exceeds the point-count cap %.4g; fields hold %.4g points "
            "on average (max_mean_points=%g)", floor, cap, math.pi * p.lam * floor ** 2,
            mc.max_mean_points, extra=extra,
        )
    limited = max(floor, min(radius, cap))
    if limited < radius:
        logger.warning(
            "window radius %.4g capped at %.4g (max_mean_points=%g); tail bias is "
            "left to the mean compensation", radius, limited, mc.max_mean_points, extra=extra,
        )
        return limited, True
    return radius, False


# ============================================================================
# Vectorised sampling
# ============================================================================

def block_rng(seed: int, block_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block_index,))))


def _fields_block(lam: float, alpha: float, radius: float, size: int,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    counts = rng.poisson(lam * math.pi * radius * radius, size=size)
    r2 = radius * radius * (1.0 - rng.random(int(counts.sum())))
    owners = np.repeat(np.arange(size), counts)
    return r2 ** (-alpha / 2.0), owners


def _block_interference(p: SystemParams, model: ModelKind, radius: float, size: int,
                        rng: np.random.Generator) -> np.ndarray:
    N = p.n_antennas
    out = np.empty((N, size))
    if model is ModelKind.NO_CORRELATION:
        for n in range(N):
            path, owners = _fields_block(p.lam, p.alpha, radius, size, rng)
            h = rng.exponential(size=path.size)
            out[n] = np.bincount(owners, weights=h * path, minlength=size)
        return out

    path, owners = _fields_block(p.lam, p.alpha, radius, size, rng)
    shared = None
    for n in range(N):
        h = rng.exponential(size=path.size)
        if model is ModelKind.EXACT_CORRELATED:
            out[n] = np.bincount(owners, weights=h * path, minlength=size)
        elif shared is None:
            shared = h
        elif model is ModelKind.MIN_FADING:
            np.minimum(shared, h, out=shared)
        elif model is ModelKind.MAX_FADING:
            np.maximum(shared, h, out=shared)
    if model is not ModelKind.EXACT_CORRELATED:
        out[:] = np.bincount(owners, weights=shared * path, minlength=size)
    return out


def sample_sir_block(p: SystemParams, model: Union[ModelKind, str], mc: MonteCarloConfig,
                     block_index: int, radius: float, noise_power: float = 0.0) -> np.ndarray:
    """SIR (or SINR when ``noise_power > 0``) samples of one block.

    Samples with no interference and no noise are ``inf``.
    """
    model = ModelKind(model)
    start = block_index * mc.block_size
    size = min(mc.block_size, mc.num_samples - start)
    if size <= 0:
        return np.empty(0)
    rng = block_rng(mc.seed, block_index)

    interference = _block_interference(p, model, radius, size, rng)
    if mc.tail_compensation and p.lam > 0.0:
        interference += tail_interference_mean(p, model, radius)
    interference += noise_power

    signal = rng.exponential(size=(p.n_antennas, size)) * p.d ** -p.alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        per_branch = np.where(interference > 0.0, signal / interference, np.inf)
    return per_branch.sum(axis=0)


def simulate_sir(p: SystemParams, model: Union[ModelKind, str], mc: MonteCarloConfig,
                 T_max: Optional[float] = None) -> np.ndarray:
    """All ``mc.num_samples`` SIR/SINR samples in sample-index order."""
    _check_sim_params(p)
    model = ModelKind(model)
    radius, capped = auto_window_radius(p, T_max, mc)
    noise_power = noise_power_for(p, mc)
    n_blocks = -(-mc.num_samples // mc.block_size)
    logger.debug(
        "simulating %d samples in %d blocks (model=%s, R=%.4g, capped=%s, workers=%d)",
        mc.num_samples, n_blocks, model.value, radius, capped, mc.workers,
    )
    run_block = partial(sample_sir_block, p, model, mc, radius=radius, noise_power=noise_power)
    if mc.workers > 1 and n_blocks > 1:
        with ProcessPoolExecutor(max_workers=mc.workers) as pool:
            blocks = list(pool.map(run_block, range(n_blocks)))
    else:
        blocks = [run_block(b) for b in range(n_blocks)]
    return np.concatenate(blocks)


# ============================================================================
# Estimators
# ============================================================================

def _estimate(T: float, below: int, n: int) -> CcdfEstimate:
    ci = binomtest(below, n).proportion_ci(confidence_level=CONFIDENCE_LEVEL, method="wilson")
    point = below / n
    return CcdfEstimate(threshold=T, point=point, ci_low=min(float(ci.low), point),
                        ci_high=max(float(ci.high), point), n=n)


def estimate_outage(T: float, p: SystemParams, model: Union[ModelKind, str],
                    mc: MonteCarloConfig) -> CcdfEstimate:
    """Fraction of samples with SIR < T and its 95% Wilson interval."""
    if T < 0.0:
        raise NonPositive(f"threshold must be >= 0, got {T}")
    samples = simulate_sir(p, model, mc, T_max=T)
    return _estimate(T, int(np.count_nonzero(samples < T)), samples.size)


def estimate_outage_curve(T_list: Sequence[float], p: SystemParams, model: Union[ModelKind, str],
                          mc: MonteCarloConfig) -> list[CcdfEstimate]:
    """Outage at every threshold from one common sample set."""
    thresholds = [float(T) for T in T_list]
    if any(T < 0.0 for T in thresholds):
        raise NonPositive("thresholds must be >= 0")
    if not thresholds:
        return []
    samples = np.sort(simulate_sir(p, model, mc, T_max=max(thresholds)))
    below = np.searchsorted(samples, thresholds, side="left")
    return [_estimate(T, int(k), samples.size) for T, k in zip(thresholds, below)]


def critical_density_mc(epsilon: float, T: float, alpha: float, d: float, N: int,
                        model: Union[ModelKind, str], mc: MonteCarloConfig) -> float:
    """Density at which the empirical outage at T equals ``epsilon``.

    Without noise the SIR at density lam is (lam0/lam)^(alpha/2) times the
    SIR at lam0, so one run at the single-antenna critical density lam0
    suffices: lam_eps = lam0 (q_eps / T)^(2/alpha) with q_eps the empirical
    epsilon-quantile.
    """
    if not 0.0 < epsilon < 1.0:
        raise NonPositive(f"epsilon must lie in (0, 1), got {epsilon}")
    if not T > 0.0:
        raise NonPositive(f"threshold must be > 0, got {T}")
    if mc.noise_snr_db is not None:
        raise ConfigError("density scaling of the SIR does not hold with noise")
    beta = 2.0 / check_alpha(alpha)
    lam0 = -math.log1p(-epsilon) / (interference_scale_c(1.0, alpha) * d * d * T ** beta)
    p = SystemParams(lam=lam0, alpha=alpha, d=d, n_antennas=N)
    samples = simulate_sir(p, model, mc, T_max=T)
    q = float(np.quantile(samples, epsilon))
    lam_eps = lam0 * (q / T) ** beta
    logger.debug("critical_density_mc N=%d model=%s lam0=%.6g q=%.6g -> %.6g",
                 N, ModelKind(model).value, lam0, q, lam_eps)
    return lam_eps


__all__ = [
    "MonteCarloConfig",
    "CcdfEstimate",
    "InterfererField",
    "sample_field",
    "sample_sir",
    "sample_sinr",
    "noise_power_for",
    "mean_interferer_gain",
    "tail_interference_mean",
    "auto_window_radius",
    "block_rng",
    "sample_sir_block",
    "simulate_sir",
    "estimate_outage",
    "estimate_outage_curve",
    "critical_density_mc",
]
