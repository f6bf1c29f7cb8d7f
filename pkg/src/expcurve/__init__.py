"""Certified computations around the transcendence measure of (e^z, e^{alpha z})."""

from . import alpha_gen  # noqa: F401  (registers built-in generator rules)
from .balls import ComplexBall, RealBall, Verdict
from .cf_core import (
    AlphaSpec,
    Convergent,
    Literal,
    LogOnly,
    PeriodicCF,
    Rule,
    cf_expand,
    convergents,
    dist_to_Z,
    eval_alpha,
    locate_index,
    parse_alpha,
)
from .errors import (
    CapExceeded,
    DomainError,
    ExpcurveError,
    InvalidSpec,
    ListTooShort,
    PrecisionExhausted,
    RankDeficiencyUnresolved,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaSpec",
    "CapExceeded",
    "ComplexBall",
    "Convergent",
    "DomainError",
    "ExpcurveError",
    "InvalidSpec",
    "ListTooShort",
    "Literal",
    "LogOnly",
    "PeriodicCF",
    "PrecisionExhausted",
    "RankDeficiencyUnresolved",
    "RealBall",
    "Rule",
    "Verdict",
    "cf_expand",
    "convergents",
    "dist_to_Z",
    "eval_alpha",
    "locate_index",
    "parse_alpha",
]
