# this config file centrally stores the constants shared by the evaluators,
# the simulator and the CLI so that no module has to import another just for
# a default value

import os
import subprocess
from typing import Optional

VERSION = "1.0.0"

# ============================================
# QUADRATURE DEFAULTS
# ============================================
# Inner r-integrals are evaluated one order tighter than the outer z-integral;
# outer accuracy is limited by inner accuracy anyway.
INNER_REL_TOL = 1e-8
INNER_ABS_TOL = 1e-12
OUTER_REL_TOL = 1e-6
OUTER_ABS_TOL = 1e-12
MAX_SUBDIVISIONS = 200

# Geometric scan of the z-integral when the analytic tail is disabled.
Z_SCAN_GROWTH = 2.0
Z_SCAN_MAX_STEPS = 200

# Tolerance used when checking that a probability lies in [0, 1].
UNIT_INTERVAL_SLACK = 1e-9

# hmax_moment switches from the alternating binomial sum to quadrature above
# this antenna count.
HMAX_ALTERNATING_MAX_N = 30

# ============================================
# SIMULATOR DEFAULTS
# ============================================
DEFAULT_SEED = 20140601
DEFAULT_NUM_SAMPLES = 100_000
DEFAULT_TAIL_FRAC = 1e-3
# Auto window radius is never below this many link distances.
WINDOW_FLOOR_FACTOR = 50.0
# Expected number of points per field above which the Auto radius is capped.
DEFAULT_MAX_MEAN_POINTS = 1000.0
# Samples per random stream; part of the stream key, never tied to workers.
DEFAULT_BLOCK_SIZE = 4096
CONFIDENCE_LEVEL = 0.95

# ============================================
# SOLVER DEFAULTS
# ============================================
BISECTION_MAX_ITER = 60
BISECTION_REL_XTOL = 1e-13
# Upper bracket is this multiple of the single-antenna critical density and
# grows by the same factor when it does not bracket the target.
BRACKET_FACTOR = 4.0
BRACKET_MAX_EXPANSIONS = 20
CRITICAL_DENSITY_TOL = 1e-7

SCDO_LAMBDA_MIN = 1e-7
SCDO_LAMBDA_MAX = 1e-5
SCDO_POINTS = 8

DELTA_FLOOR = 1e-15

# ============================================
# FIGURE PRESETS
# ============================================
# Each preset pins one subcommand and the parameters printed in a figure
# caption. Threshold grids in dB are converted by the CLI.
FIGURE_PRESETS: dict[str, dict] = {
    "3": {
        "command": "ccdf",
        "lam": 1e-3, "alpha": 3.5, "d": 10.0, "n_antennas": 2,
        "t_grid_db": {"start": -10.0, "stop": 20.0, "num": 12},
        "models": ["exact-analytic", "exact-sim", "no-correlation-sim"],
        "samples": 1_000_000,
    },
    "4": {
        "command": "compare",
        "n_antennas": 2, "d": 15.0,
        "lambda_list": [1e-3, 1e-2],
        "alpha_list": [3.0, 3.5, 4.0, 5.0],
        "t_grid_db": {"start": -40.0, "stop": 20.0, "num": 25},
        "metrics": ["delta-fc"],
    },
    "5a": {
        "command": "ccdf",
        "lam": 1e-3, "alpha": 4.0, "d": 15.0, "n_antennas": 2,
        "t_grid_db": {"start": -10.0, "stop": 20.0, "num": 16},
        "models": [
            "exact-analytic", "fc-analytic", "min-analytic", "max-analytic",
            "single-analytic", "exact-sim", "fc-sim", "min-sim", "max-sim",
        ],
        "samples": 200_000,
    },
    "5b": {
        "command": "compare",
        "lam": 1e-3, "d": 10.0,
        "alpha_list": [3.0, 4.0, 5.0],
        "n_list": [1, 2, 3, 4, 5, 6, 7, 8],
        "t_list_db": [-3.0, 9.0],
        "metrics": ["delta-minmax", "delta-minmax-asymptotic"],
    },
    "6b": {
        "command": "scdo",
        "alpha": 4.0, "d": 10.0, "threshold": 1.0,
        "n_list": [1, 2, 4],
        "lambda_grid": {"start": 1e-6, "stop": 1e-2, "num": 9},
        "snr_db": 14.0,
        "samples": 200_000,
    },
    "7": {
        "command": "critical-density",
        "epsilon": 0.05, "alpha": 4.0, "d": 15.0, "threshold": 1.0,
        "n_list": [1, 2, 3, 4, 5, 6, 7, 8],
        "samples": 1_000_000,
    },
}

# ============================================
# SERVICE
# ============================================
DEFAULT_PORT = 9666


def get_log_level() -> str:
    """Log level from ``MRC_OUTAGE_LOG_LEVEL`` (default ``WARNING``)."""
    return os.getenv("MRC_OUTAGE_LOG_LEVEL", "WARNING").upper()


def get_debug_log_path() -> Optional[str]:
    """Path of the NDJSON debug log, or None when ``MRC_OUTAGE_DEBUG_LOG`` is unset."""
    path = os.getenv("MRC_OUTAGE_DEBUG_LOG")
    return path or None


def get_default_workers() -> int:
    """Worker-pool size.

    Priority order:
      1. ``MRC_OUTAGE_WORKERS`` env var when it parses as a positive int.
      2. 1 (serial execution).
    """
    raw = os.getenv("MRC_OUTAGE_WORKERS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            return 1
        if value >= 1:
            return value
    return 1


def get_service_port() -> int:
    raw = os.getenv("MRC_OUTAGE_PORT")
    if raw and raw.isdigit():
        return int(raw)
    return DEFAULT_PORT


def get_cors_origins() -> list[str]:
    """Origins allowed to call the service cross-origin.

    Priority order:
      1. localhost / 127.0.0.1 on the service port and on 8888 (notebooks).
      2. ``MRC_OUTAGE_CORS_ORIGINS`` appended (comma-separated, trailing
         slashes dropped, duplicates skipped).
    """
    port = get_service_port()
    origins = [
        f"http://localhost:{port}",
        f"http://127.0.0.1:{port}",
        "http://localhost:8888",
        "http://127.0.0.1:8888",
    ]
    for origin in os.getenv("MRC_OUTAGE_CORS_ORIGINS", "").split(","):
        origin = origin.strip().rstrip("/")
        if origin and origin not in origins:
            origins.append(origin)
    return origins


def git_revision() -> Optional[str]:
    """Short git hash of the working tree, or None outside a git checkout."""
    base = os.path.dirname(os.path.abspath(__file__))
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            cwd=base,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    if out.returncode != 0:
        return None
    return out.stdout.strip() or None
