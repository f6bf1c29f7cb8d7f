"""Thin helpers around Arb balls (``flint.arb`` / ``flint.acb``).

Arb already guarantees that every operation returns a ball containing the
exact result, so RealBall and ComplexBall are simply ``arb`` and ``acb``.
This module adds the pieces the rest of the package needs on top: a
three-valued verdict, endpoint comparisons, a precision ladder and directed
decimal serialization of endpoints.
"""

from __future__ import annotations

import enum
import math
import os
from contextlib import contextmanager
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Iterator, Union

from flint import acb, arb, ctx, fmpq, fmpz

RealBall = arb
ComplexBall = acb

Number = Union[int, Fraction, arb]

DEFAULT_PREC_CAP = 1_048_576
PREC_CAP_ENV = "EXPCURVE_PREC_CAP"


class Verdict(str, enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNDECIDED = "UNDECIDED"

    def __str__(self) -> str:
        return self.value


def all_verdicts(verdicts: Iterable[Verdict]) -> Verdict:
    """Conjunction: FALSE dominates, then UNDECIDED."""
    seen_undecided = False
    for v in verdicts:
        if v is Verdict.FALSE:
            return Verdict.FALSE
        if v is Verdict.UNDECIDED:
            seen_undecided = True
    return Verdict.UNDECIDED if seen_undecided else Verdict.TRUE


def default_prec_cap() -> int:
    raw = os.environ.get(PREC_CAP_ENV)
    if raw:
        try:
            return max(64, int(raw))
        except ValueError:
            pass
    return DEFAULT_PREC_CAP


def start_precision(n: int) -> int:
    """Starting precision max(64, 4 n log2 n + 64) bits for index ``n``."""
    if n <= 1:
        return 64
    return max(64, math.ceil(4 * n * math.log2(n)) + 64)


def precision_ladder(start: int, cap: int | None = None) -> Iterator[int]:
    """Yield start, 2*start, ... up to and including ``cap``."""
    cap = default_prec_cap() if cap is None else cap
    bits = max(32, min(start, cap))
    while True:
        yield bits
        if bits >= cap:
            return
        bits = min(2 * bits, cap)


@contextmanager
def working_precision(bits: int):
    old = ctx.prec
    ctx.prec = int(bits)
    try:
        yield
    finally:
        ctx.prec = old


def to_arb(x: Number) -> arb:
    if isinstance(x, arb):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return arb(fmpz(x.numerator))
        return arb(fmpq(x.numerator, x.denominator))
    if isinstance(x, int):
        return arb(fmpz(x))
    if isinstance(x, float):
        return arb(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a ball")


def lo(x: Number) -> arb:
    return to_arb(x).lower()


def hi(x: Number) -> arb:
    return to_arb(x).upper()


def le(a: Number, b: Number) -> Verdict:
    """Verdict on a <= b decided on ball endpoints."""
    a, b = to_arb(a), to_arb(b)
    if not (a.is_finite() and b.is_finite()):
        return Verdict.UNDECIDED
    if a.upper() <= b.lower():
        return Verdict.TRUE
    if a.lower() > b.upper():
        return Verdict.FALSE
    return Verdict.UNDECIDED


def lt(a: Number, b: Number) -> Verdict:
    """Verdict on a < b decided on ball endpoints."""
    a, b = to_arb(a), to_arb(b)
    if not (a.is_finite() and b.is_finite()):
        return Verdict.UNDECIDED
    if a.upper() < b.lower():
        return Verdict.TRUE
    if a.lower() >= b.upper():
        return Verdict.FALSE
    return Verdict.UNDECIDED


def ge(a: Number, b: Number) -> Verdict:
    return le(b, a)


def gt(a: Number, b: Number) -> Verdict:
    return lt(b, a)


def overlap(a: Number, b: Number) -> Verdict:
    """TRUE if the balls intersect (the only certifiable form of equality)."""
    return Verdict.TRUE if to_arb(a).overlaps(to_arb(b)) else Verdict.FALSE


def ball_max(*xs: arb) -> arb:
    out = xs[0]
    for x in xs[1:]:
        out = out.max(x)
    return out


def from_endpoints(a: Number, b: Number) -> arb:
    """Smallest convenient ball containing [a, b]."""
    return to_arb(a).union(to_arb(b))


def exact_fraction(x: arb) -> Fraction:
    """Exact rational value of an exact (radius zero) ball."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _directed_decimal(x: arb, digits: int, rounding: str) -> str:
    if x.is_zero():
        return "0"
    frac = exact_fraction(x)
    with localcontext() as dctx:
        dctx.prec = digits
        dctx.rounding = rounding
        dctx.Emax = 10**9
        dctx.Emin = -(10**9)
        d = Decimal(frac.numerator) / Decimal(frac.denominator)
    return str(d)


def interval_strings(x: arb, digits: int = 20) -> list[str]:
    """``[lo, hi]`` as decimal strings rounded outward; never a midpoint."""
    if not x.is_finite():
        return ["-inf", "inf"]
    return [
        _directed_decimal(x.lower(), digits, ROUND_FLOOR),
        _directed_decimal(x.upper(), digits, ROUND_CEILING),
    ]


def interval_floats(x: arb) -> tuple[float, float]:
    """Outward-rounded float endpoints, for quick human-facing summaries."""
    lo_s, hi_s = interval_strings(x, 17)
    return float(lo_s), float(hi_s)


def ball_from_strings(bounds: Iterable[str]) -> arb:
    """Inverse of :func:`interval_strings` (the result contains [lo, hi])."""
    lo_s, hi_s = list(bounds)
    return arb(lo_s).union(arb(hi_s))


def ball_str(x: arb, digits: int) -> str:
    """Midpoint-radius text that Arb can parse back to a containing ball."""
    return x.str(digits, radius=True, more=True)


def cball_strs(z: acb, digits: int) -> list[str]:
    return [ball_str(z.real, digits), ball_str(z.imag, digits)]


def cball_parse(parts: Iterable[str]) -> acb:
    re_s, im_s = list(parts)
    return acb(arb(re_s), arb(im_s))


def mid_float(x: arb) -> float:
    return float(x.mid())


def log_ball(x: Number) -> arb:
    """Natural log of a positive integer, rational or ball."""
    return to_arb(x).log()


def relative_width(x: arb) -> float:
    """(hi - lo) / |lo| as a float; inf when the ball touches zero."""
    lower = x.abs_lower()
    if lower.is_zero() or not lower > 0:
        return math.inf
    return float((2 * x.rad()) / lower)
