"""
SIR outage of an N-antenna maximum-ratio-combining receiver in a Poisson
field of Rayleigh-faded interferers.

Modules:
  core        - parameters, model kinds, single-antenna closed forms
  quadrature  - adaptive quadrature and the exact dual-antenna CCDF
  bounds      - Laplace-derivative CCDFs: full correlation, min/max fading
  simulator   - seeded Monte Carlo oracle
  analysis    - critical density, outage slope, deviation ratios
  cli         - command-line front end (``python -m mrc_outage``)
"""
from .config import VERSION
from .core import DEFAULT_MODEL, ModelKind, Probability, SystemParams, scale_transform
from .errors import MrcOutageError, NumericalError, ParameterError

__version__ = VERSION

__all__ = [
    "DEFAULT_MODEL",
    "ModelKind",
    "MrcOutageError",
    "NumericalError",
    "ParameterError",
    "Probability",
    "SystemParams",
    "scale_transform",
    "__version__",
]
