"""Certificates for complete monotonicity of gamma and q-gamma ratios."""

from .errors import DomainError, GammaCMError, PrecisionError, SpecError
from .model import GammaFactor, RatioSpec, Status, Verdict
from .report import CheckOptions, CheckReport, run_check

__all__ = [
    "CheckOptions",
    "CheckReport",
    "DomainError",
    "GammaCMError",
    "GammaFactor",
    "PrecisionError",
    "RatioSpec",
    "SpecError",
    "Status",
    "Verdict",
    "run_check",
]
__version__ = "0.1.0"
