"""
Command-line front end.

    python -m mrc_outage ccdf --lambda 1e-3 --alpha 3.5 --d 10 --t-grid-db=-10:20:12 \
        --model exact-analytic --model exact-sim --out fig3.csv

Settings are layered, later layers win:
  1. RunConfig defaults
  2. ``--paper-figure`` preset (config.FIGURE_PRESETS)
  3. ``--config file.json``
  4. explicit flags

Exit codes: 0 success, 2 invalid parameters or configuration, 3 numerical
failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import partial
from typing import Any, Callable, Literal, Optional, Sequence, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, field_validator

from . import analysis, bounds, quadrature, simulator
from .config import (
    DEFAULT_NUM_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TAIL_FRAC,
    INNER_ABS_TOL,
    INNER_REL_TOL,
    MAX_SUBDIVISIONS,
    OUTER_REL_TOL,
    FIGURE_PRESETS,
    VERSION,
    get_default_workers,
    git_revision,
)
from .core import ModelKind, SystemParams, db_to_linear, single_antenna_cdf
from .errors import ConfigError, DegenerateDesign, NumericalError, ParameterError, UnsupportedEvaluator
from .log import setup_logging

logger = logging.getLogger(__name__)

Command = Literal["ccdf", "critical-density", "scdo", "compare", "simulate"]

MODEL_ALIASES = {
    "exact": "exact",
    "fc": "full-correlation",
    "full-correlation": "full-correlation",
    "min": "min-fading",
    "min-fading": "min-fading",
    "max": "max-fading",
    "max-fading": "max-fading",
    "no-correlation": "no-correlation",
    "single": "single",
}

METRICS = ("delta-fc", "delta-minmax", "delta-minmax-asymptotic")

Item = TypeVar("Item")


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """Every setting one CLI run needs, validated up front."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    lam: PositiveFloat = 1e-3
    alpha: float = Field(default=4.0, gt=2.0)
    d: PositiveFloat = 10.0
    n_antennas: int = Field(default=2, ge=1)
    threshold: PositiveFloat = 1.0
    epsilon: float = Field(default=0.05, gt=0.0, lt=1.0)
    t_grid: Optional[list[float]] = None
    lambda_grid: Optional[list[float]] = None
    lambda_list: Optional[list[PositiveFloat]] = None
    alpha_list: Optional[list[float]] = None
    n_list: Optional[list[int]] = None
    models: list[str] = Field(default_factory=lambda: ["exact-analytic"])
    model: ModelKind = ModelKind.EXACT_CORRELATED
    metrics: list[str] = Field(default_factory=lambda: ["delta-fc", "delta-minmax"])
    samples: int = Field(default=DEFAULT_NUM_SAMPLES, ge=0)
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2 ** 64)
    radius: Union[PositiveFloat, Literal["auto"]] = "auto"
    tail_frac: float = Field(default=DEFAULT_TAIL_FRAC, gt=0.0, lt=1.0)
    snr_db: Optional[float] = None
    workers: int = Field(default_factory=get_default_workers, ge=1)
    rel_tol: PositiveFloat = INNER_REL_TOL
    abs_tol: PositiveFloat = INNER_ABS_TOL
    outer_rel_tol: PositiveFloat = OUTER_REL_TOL
    max_subdivisions: int = Field(default=MAX_SUBDIVISIONS, ge=1)
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @field_validator("t_grid", "lambda_grid")
    @classmethod
    def _strictly_increasing(cls, value):
        if value is None:
            return value
        if not value:
            raise ValueError("grid must not be empty")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("grid must be strictly increasing")
        if value[0] < 0.0:
            raise ValueError("grid values must be >= 0")
        return value

    @field_validator("lambda_list", "alpha_list", "n_list", "models", "metrics")
    @classmethod
    def _nonempty(cls, value):
        if value is not None and not value:
            raise ValueError("list must not be empty")
        return value

    @field_validator("alpha_list")
    @classmethod
    def _alphas(cls, value):
        if value is not None and any(a <= 2.0 for a in value):
            raise ValueError("path-loss exponents must be > 2")
        return value

    @field_validator("n_list")
    @classmethod
    def _antennas(cls, value):
        if value is not None and any(n < 1 for n in value):
            raise ValueError("antenna counts must be >= 1")
        return value

    @field_validator("metrics")
    @classmethod
    def _known_metrics(cls, value):
        unknown = [m for m in value if m not in METRICS]
        if unknown:
            raise ValueError(f"unknown metrics {unknown}; choose from {list(METRICS)}")
        return value

    def params(self, **overrides) -> SystemParams:
        values = dict(lam=self.lam, alpha=self.alpha, d=self.d, n_antennas=self.n_antennas)
        values.update(overrides)
        return SystemParams(**values)

    def thresholds(self) -> list[float]:
        return list(self.t_grid) if self.t_grid is not None else [self.threshold]

    def monte_carlo_config(self, snr_db: Optional[float] = None) -> simulator.MonteCarloConfig:
        return simulator.MonteCarloConfig(
            num_samples=max(self.samples, 1), window_radius=self.radius, seed=self.seed,
            tail_frac=self.tail_frac, noise_snr_db=snr_db, workers=self.workers,
        )

    def quadrature_config(self) -> quadrature.QuadratureConfig:
        return quadrature.QuadratureConfig(
            rel_tol=self.rel_tol, abs_tol=self.abs_tol,
            outer_rel_tol=self.outer_rel_tol, max_subdivisions=self.max_subdivisions,
        )


@dataclass
class Table:
    """Rows of one run plus run-level results for the JSON ``meta`` block."""
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)


# ============================================================================
# Config layering
# ============================================================================

def _db_grid(spec: dict) -> list[float]:
    try:
        db = np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["num"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad dB grid {spec!r}: {exc}") from None
    return [db_to_linear(float(x)) for x in db]


def _expand_grids(layer: dict) -> dict:
    """Turn the dB / log-spaced grid shorthands of one layer into plain lists."""
    layer = dict(layer)
    if "t_grid_db" in layer:
        layer["t_grid"] = _db_grid(layer.pop("t_grid_db"))
    if "t_list_db" in layer:
        layer["t_grid"] = sorted(db_to_linear(float(x)) for x in layer.pop("t_list_db"))
    grid = layer.get("lambda_grid")
    if isinstance(grid, dict):
        try:
            layer["lambda_grid"] = [float(x) for x in np.geomspace(
                float(grid["start"]), float(grid["stop"]), int(grid["num"]))]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad lambda grid {grid!r}: {exc}") from None
    return layer


def _check_command(layer: dict, command: str, source: str) -> dict:
    layer = dict(layer)
    pinned = layer.pop("command", command)
    if pinned != command:
        raise ConfigError(f"{source} is for '{pinned}', not '{command}'")
    return layer


def load_preset(name: str, command: str) -> dict:
    if name not in FIGURE_PRESETS:
        raise ConfigError(f"unknown figure preset {name!r}; choose from {sorted(FIGURE_PRESETS)}")
    return _expand_grids(_check_command(FIGURE_PRESETS[name], command, f"preset {name}"))


def load_config_file(path: str, command: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return _expand_grids(_check_command(data, command, f"config file {path}"))


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}: {exc}") from None


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}: {exc}") from None


def _parse_db_range(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"dB grid must be START:STOP:NUM, got {text!r}")
    return {"start": parts[0], "stop": parts[1], "num": parts[2]}


def flag_layer(args: argparse.Namespace) -> dict:
    """Settings given explicitly on the command line."""
    layer: dict[str, Any] = {}
    direct = ("lam", "alpha", "d", "n_antennas", "threshold", "epsilon", "samples", "seed",
              "tail_frac", "snr_db", "workers", "rel_tol", "abs_tol", "outer_rel_tol",
              "max_subdivisions", "out", "format", "metrics")
    for name in direct:
        value = getattr(args, name, None)
        if value is not None:
            layer[name] = value
    if args.radius is not None:
        layer["radius"] = "auto" if args.radius == "auto" else float(args.radius)
    if args.model is not None:
        if args.command == "simulate":
            if len(args.model) != 1:
                raise ConfigError("simulate takes exactly one --model")
            layer["model"] = MODEL_ALIASES.get(args.model[0], args.model[0])
        else:
            layer["models"] = args.model
    if args.t_grid is not None:
        layer["t_grid"] = _parse_floats(args.t_grid)
    if args.t_grid_db is not None:
        layer["t_grid_db"] = _parse_db_range(args.t_grid_db)
    if args.lambda_grid is not None:
        layer["lambda_grid"] = _parse_floats(args.lambda_grid)
    if args.lambda_list is not None:
        layer["lambda_list"] = _parse_floats(args.lambda_list)
    if args.alpha_list is not None:
        layer["alpha_list"] = _parse_floats(args.alpha_list)
    if args.n_list is not None:
        layer["n_list"] = _parse_ints(args.n_list)
    return _expand_grids(layer)


def build_config(args: argparse.Namespace) -> RunConfig:
    merged: dict[str, Any] = {}
    if args.paper_figure:
        merged.update(load_preset(args.paper_figure, args.command))
    if args.config:
        merged.update(load_config_file(args.config, args.command))
    merged.update(flag_layer(args))
    merged["command"] = args.command
    return RunConfig(**merged)


# ============================================================================
# Commands
# ============================================================================

def _sweep(fn: Callable[[Item], float], items: Sequence[Item], workers: int) -> list[float]:
    """``[fn(x) for x in items]``, in order, on a process pool when ``workers > 1``.

    Only analytic points go through here; simulations use the Monte Carlo
    pool, so pools never nest.
    """
    items = list(items)
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _split_model_token(token: str) -> tuple[str, str]:
    base, _, source = token.rpartition("-")
    if source not in ("analytic", "sim") or base not in MODEL_ALIASES:
        raise ConfigError(f"model {token!r} must be <model>-analytic or <model>-sim with model in "
                          f"{sorted(set(MODEL_ALIASES))}")
    return MODEL_ALIASES[base], source


def _analytic_cdf(model: str, T: float, p: SystemParams, qcfg: quadrature.QuadratureConfig) -> float:
    if model == "single":
        return single_antenna_cdf(T, p)
    if model == "exact":
        return quadrature.cdf_exact(T, p, qcfg)
    if model == "no-correlation":
        raise UnsupportedEvaluator("no-correlation has no analytic CDF; use no-correlation-sim")
    return bounds.cdf_bound(ModelKind(model), T, p)


def cmd_ccdf(cfg: RunConfig) -> Table:
    """Outage P(SIR <= T) over the threshold grid for every requested model."""
    table = Table(columns=["T", "model", "cdf", "ci_low", "ci_high", "source"])
    p, thresholds, qcfg = cfg.params(), cfg.thresholds(), cfg.quadrature_config()
    for token in cfg.models:
        model, source = _split_model_token(token)
        if source == "analytic":
            values = _sweep(partial(_analytic_cdf, model, p=p, qcfg=qcfg), thresholds, cfg.workers)
            for T, value in zip(thresholds, values):
                table.rows.append({"T": T, "model": model, "cdf": value,
                                   "ci_low": None, "ci_high": None, "source": "analytic"})
            continue
        if model == "single":
            raise UnsupportedEvaluator("single-antenna curves are analytic only")
        kind = ModelKind.EXACT_CORRELATED if model == "exact" else ModelKind(model)
        for est in simulator.estimate_outage_curve(thresholds, p, kind, cfg.monte_carlo_config(cfg.snr_db)):
            table.rows.append({"T": est.threshold, "model": model, "cdf": est.point,
                               "ci_low": est.ci_low, "ci_high": est.ci_high, "source": "simulation"})
    return table


def cmd_simulate(cfg: RunConfig) -> Table:
    table = Table(columns=["T", "model", "cdf", "ci_low", "ci_high", "n"])
    p, thresholds = cfg.params(), cfg.thresholds()
    mc = cfg.monte_carlo_config(cfg.snr_db)
    radius, capped = simulator.auto_window_radius(p, max(thresholds), mc)
    for est in simulator.estimate_outage_curve(thresholds, p, cfg.model, mc):
        table.rows.append({"T": est.threshold, "model": cfg.model.value, "cdf": est.point,
                           "ci_low": est.ci_low, "ci_high": est.ci_high, "n": est.n})
    table.summary = {"window_radius": radius, "radius_capped": capped}
    return table


def cmd_critical_density(cfg: RunConfig) -> Table:
    """Density gain over one antenna per N, with the sqrt(N) fit of the gains."""
    n_list = cfg.n_list or [cfg.n_antennas]
    mc = cfg.monte_carlo_config() if cfg.samples > 0 else None
    rows = analysis.critical_density_gains(cfg.epsilon, cfg.threshold, cfg.alpha, cfg.d,
                                           n_list, mc, cfg.quadrature_config())
    table = Table(columns=["n_antennas", "lambda_exact", "lambda_min_bound", "lambda_max_bound",
                           "lambda_fc", "lambda_mc", "gain_exact", "gain_mc", "gain"])
    fit_n, fit_gain = [], []
    for row in rows:
        values = asdict(row)
        gain = row.gain_exact if row.gain_exact is not None else row.gain_mc
        values["gain"] = gain
        table.rows.append(values)
        if gain is not None:
            fit_n.append(row.n_antennas)
            fit_gain.append(gain)
    table.summary["lambda_single"] = analysis.critical_density_single(
        cfg.epsilon, cfg.threshold, cfg.alpha, cfg.d)
    try:
        a, b = analysis.sqrt_fit(fit_n, fit_gain)
    except DegenerateDesign as exc:
        logger.info("no sqrt(N) fit: %s", exc)
    else:
        table.summary.update({
            "fit_a": a, "fit_b": b,
            "fit_residuals": [g - (a * math.sqrt(n) + b) for n, g in zip(fit_n, fit_gain)],
        })
    return table


def cmd_scdo(cfg: RunConfig) -> Table:
    """Outage against density, slope fits and the small-density constants."""
    n_list = cfg.n_list or [cfg.n_antennas]
    grid = cfg.lambda_grid or [float(x) for x in analysis.default_lambda_grid()]
    T, qcfg = cfg.threshold, cfg.quadrature_config()
    table = Table(columns=["n_antennas", "lambda", "cdf_analytic", "cdf_sim", "sim_ci_low",
                           "sim_ci_high", "cdf_sim_noise", "noise_ci_low", "noise_ci_high"])
    fits = {}
    for N in n_list:
        points = [cfg.params(lam=lam, n_antennas=N) for lam in grid]
        analytic = (_sweep(partial(quadrature.cdf_exact, T, cfg=qcfg), points, cfg.workers)
                    if N <= 2 else [None] * len(points))
        for lam, p, cdf in zip(grid, points, analytic):
            row = dict.fromkeys(table.columns)
            row.update(n_antennas=N, cdf_analytic=cdf, **{"lambda": lam})
            if cfg.samples > 0:
                est = simulator.estimate_outage(T, p, ModelKind.EXACT_CORRELATED, cfg.monte_carlo_config())
                row.update(cdf_sim=est.point, sim_ci_low=est.ci_low, sim_ci_high=est.ci_high)
                if cfg.snr_db is not None:
                    est = simulator.estimate_outage(T, p, ModelKind.EXACT_CORRELATED,
                                                    cfg.monte_carlo_config(cfg.snr_db))
                    row.update(cdf_sim_noise=est.point, noise_ci_low=est.ci_low,
                               noise_ci_high=est.ci_high)
            table.rows.append(row)
        if N <= 2:
            fit = analysis.scdo_slope(T, cfg.alpha, cfg.d, N, grid, cfg=qcfg)
            fits[str(N)] = asdict(fit)
    table.summary["slope_fits"] = fits
    a1, a2 = analysis.a1_a2(T, cfg.alpha, cfg.d, qcfg)
    table.summary.update({"A1": a1, "A2": a2, "A2_exceeds_A1": a2 > a1,
                          "log_A2_minus_A1": math.log(a2 - a1)})
    return table


def cmd_compare(cfg: RunConfig) -> Table:
    """Deviation ratios over the requested density, exponent and N axes."""
    table = Table(columns=["metric", "lambda", "alpha", "n_antennas", "T", "value"])
    lambdas = cfg.lambda_list or [cfg.lam]
    alphas = cfg.alpha_list or [cfg.alpha]
    n_list = cfg.n_list or [cfg.n_antennas]
    points = []
    for metric in cfg.metrics:
        for alpha in alphas:
            for N in n_list:
                if metric == "delta-minmax-asymptotic":
                    points.append((metric, None, alpha, N, None))
                    continue
                if metric == "delta-fc" and N > 2:
                    logger.info("delta-fc skipped for N=%d (no exact CDF)", N)
                    continue
                points.extend((metric, lam, alpha, N, T) for lam in lambdas for T in cfg.thresholds())
    values = _sweep(partial(_compare_value, cfg=cfg), points, cfg.workers)
    for (metric, lam, alpha, N, T), value in zip(points, values):
        table.rows.append({"metric": metric, "lambda": lam, "alpha": alpha,
                           "n_antennas": N, "T": T, "value": value})
    return table


def _compare_value(point: tuple, cfg: RunConfig) -> float:
    metric, lam, alpha, N, T = point
    if metric == "delta-minmax-asymptotic":
        return bounds.asymptotic_delta_minmax(alpha, N)
    p = cfg.params(lam=lam, alpha=alpha, n_antennas=N)
    if metric == "delta-fc":
        return analysis.delta_fc(T, p, cfg.quadrature_config())
    return analysis.delta_minmax(T, p)


COMMANDS = {
    "ccdf": cmd_ccdf,
    "critical-density": cmd_critical_density,
    "scdo": cmd_scdo,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
}


# ============================================================================
# Output
# ============================================================================

def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(table: Table, cfg: RunConfig) -> str:
    if cfg.format is OutputFormat.JSON:
        meta = {
            "version": VERSION,
            "git_revision": git_revision(),
            "config": cfg.model_dump(mode="json", exclude={"out", "workers"}),
            "summary": table.summary,
        }
        rows = [{c: row.get(c) for c in table.columns} for row in table.rows]
        return json.dumps({"meta": meta, "rows": rows}, indent=2, sort_keys=False) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(row.get(c)) for c in table.columns])
    return buffer.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".mrc_outage-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--lambda", dest="lam", type=float, help="interferer density")
    add("--alpha", type=float, help="path-loss exponent (> 2)")
    add("--d", type=float, help="link distance")
    add("--n-antennas", type=int, help="receive antennas N")
    add("--threshold", type=float, help="SIR threshold T (linear)")
    add("--epsilon", type=float, help="target outage for critical density")
    add("--t-grid", help="comma-separated linear thresholds")
    add("--t-grid-db", help="threshold grid START:STOP:NUM in dB (use = before a negative START)")
    add("--lambda-grid", help="comma-separated densities")
    add("--lambda-list", help="comma-separated densities (compare)")
    add("--alpha-list", help="comma-separated exponents (compare)")
    add("--n-list", help="comma-separated antenna counts")
    add("--model", action="append",
        help="ccdf: <model>-analytic|<model>-sim (repeatable); simulate: a correlation model")
    add("--metric", dest="metrics", action="append", choices=METRICS, help="compare metric")
    add("--samples", type=int, help="Monte Carlo samples (0 disables simulation)")
    add("--seed", type=int, help="Monte Carlo seed")
    add("--radius", help="simulation window radius or 'auto'")
    add("--tail-frac", type=float, help="tail criterion of the auto radius")
    add("--snr-db", type=float, help="mean per-branch SNR in dB (adds noise)")
    add("--rel-tol", type=float, help="inner quadrature relative tolerance")
    add("--abs-tol", type=float, help="quadrature absolute tolerance")
    add("--outer-rel-tol", type=float, help="outer quadrature relative tolerance")
    add("--max-subdivisions", type=int, help="quadrature subdivision limit")
    add("--out", help="output file (default: stdout)")
    add("--format", choices=[f.value for f in OutputFormat], help="csv or json")
    add("--config", help="JSON config file")
    add("--paper-figure", choices=sorted(FIGURE_PRESETS), help="preset parameters of a figure")
    add("--workers", type=int, help="worker processes for sweep points and Monte Carlo blocks")
    add("--log-level", help="console log level")
    add("--debug-log", help="append NDJSON debug records to this file")

    parser = argparse.ArgumentParser(
        prog="mrc_outage",
        description="SIR outage of multi-antenna MRC receivers in Poisson fields",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "ccdf": "outage curves, analytic and simulated",
        "critical-density": "critical density and its gain over one antenna",
        "scdo": "outage against density and its slope",
        "compare": "deviation ratios between models",
        "simulate": "Monte Carlo outage curve of one model",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def run(cfg: RunConfig) -> str:
    table = COMMANDS[cfg.command](cfg)
    text = render(table, cfg)
    if cfg.out:
        write_atomic(cfg.out, text)
        logger.info("wrote %d rows to %s", len(table.rows), cfg.out)
    else:
        sys.stdout.write(text)
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.debug_log)
    try:
        cfg = build_config(args)
        run(cfg)
    except (ParameterError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
