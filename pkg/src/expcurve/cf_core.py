"""Continued fractions of an irrational alpha, with certified evaluation.

Partial quotients and convergents are exact Python integers.  When an integer
would exceed the digit cap it is replaced by a :class:`LogOnly` magnitude that
only carries a ball for its natural logarithm; such values can still be
compared and used in log-space formulas but never multiplied out.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence, Union

from flint import arb, fmpz

from .balls import (
    Verdict,
    all_verdicts,
    default_prec_cap,
    gt,
    lt,
    le,
    precision_ladder,
    to_arb,
    working_precision,
)
from .errors import (
    CapExceeded,
    InvalidSpec,
    ListTooShort,
    PrecisionExhausted,
)

DEFAULT_DIGIT_CAP = 10**6
LOG_PREC = 256
# trailing-zero run that makes a Literal look like a terminating decimal
RATIONAL_LIKE_ZEROS = 5
_LOG10_2 = math.log10(2)


# --------------------------------------------------------------------------
# magnitudes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LogOnly:
    """A positive integer known only through an enclosure of its natural log."""

    ln: arb = field(compare=False)
    note: str = ""

    def __post_init__(self):
        if not self.ln > 0:
            raise InvalidSpec(f"LogOnly magnitude needs ln > 0, got {self.ln}")

    def __repr__(self) -> str:
        return f"LogOnly(ln={self.ln.str(12)})"


MagnitudeInt = Union[int, LogOnly]


def is_exact(x: MagnitudeInt) -> bool:
    return isinstance(x, int)


def decimal_digits_estimate(x: int) -> int:
    return int(abs(x).bit_length() * _LOG10_2) + 1


def exceeds_cap(x: int, digit_cap: int) -> bool:
    return decimal_digits_estimate(x) > digit_cap


def ln_magnitude(x: MagnitudeInt) -> arb:
    """Ball for ln x (x >= 1)."""
    if isinstance(x, LogOnly):
        return x.ln
    if x < 1:
        raise InvalidSpec(f"ln of non-positive magnitude {x}")
    with working_precision(max(LOG_PREC, _ctx_prec())):
        return arb(fmpz(x)).log()


def to_log_only(x: int, note: str = "exact value converted") -> LogOnly:
    return LogOnly(ln_magnitude(x), note)


def magnitude_gt(x: MagnitudeInt, n: int) -> bool:
    """Certified x > n (LogOnly values are compared through their logs)."""
    if isinstance(x, int):
        return x > n
    if n < 1:
        return True
    return bool(x.ln.lower() > ln_magnitude(n).upper())


def _ctx_prec() -> int:
    from flint import ctx

    return ctx.prec


def _combine(a: MagnitudeInt, x1: MagnitudeInt, x2: MagnitudeInt,
             digit_cap: int, what: str) -> MagnitudeInt:
    """a*x1 + x2, switching to LogOnly past the digit cap.

    The LogOnly bracket is ln(a x1 + x2) in [ln a + ln x1, ln a + ln x1 + x2/(a x1)],
    with x2/(a x1) <= 1/a when x2 <= x1.
    """
    if all(isinstance(v, int) for v in (a, x1, x2)):
        if x1 == 0:
            return x2
        est = (a.bit_length() + x1.bit_length()) * _LOG10_2
        if est <= digit_cap + 1:
            val = a * x1 + x2
            if not exceeds_cap(val, digit_cap):
                return val
    if isinstance(x1, int) and x1 == 0:
        return x2
    with working_precision(LOG_PREC):
        base = ln_magnitude(a) + ln_magnitude(x1)
        if all(isinstance(v, int) for v in (a, x1, x2)):
            slack = arb(fmpz(x2)) / (arb(fmpz(a)) * arb(fmpz(x1)))
        else:
            if isinstance(x2, int) and isinstance(x1, int) and x2 > x1:
                raise CapExceeded(f"cannot bracket {what}: x_(s-2) > x_(s-1)")
            if isinstance(x2, LogOnly) and isinstance(x1, int):
                raise CapExceeded(f"cannot bracket {what}: x_(s-2) > x_(s-1)")
            if isinstance(x2, LogOnly) and isinstance(x1, LogOnly) and not (
                    x2.ln.upper() <= x1.ln.lower()):
                raise CapExceeded(f"cannot bracket {what}: ordering undecided")
            ln_a_lo = ln_magnitude(a).lower()
            # 1/a <= exp(-min(ln a, guard)); the guard keeps exp() cheap
            guard = arb(4 * LOG_PREC)
            slack = (-(ln_a_lo.min(guard))).exp()
        value = base + arb(0).union(slack)
    return LogOnly(value, f"{what} beyond digit cap {digit_cap}")


# --------------------------------------------------------------------------
# alpha specifications
# --------------------------------------------------------------------------


def _check_quotients(values: Sequence[int], first_is_a0: bool, what: str):
    for i, a in enumerate(values):
        if not isinstance(a, int):
            raise InvalidSpec(f"{what}: partial quotients must be integers")
        if (i > 0 or not first_is_a0) and a < 1:
            raise InvalidSpec(f"{what}: partial quotient {a} < 1 at position {i}")


def _fmt_list(xs: Sequence[int]) -> str:
    return ",".join(str(x) for x in xs)


@dataclass(frozen=True)
class PeriodicCF:
    """[a_0; pre..., (period)...] -- a quadratic irrational."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise InvalidSpec("PeriodicCF needs a nonempty period")
        _check_quotients(self.preperiod, True, "preperiod")
        _check_quotients(self.period, not self.preperiod, "period")

    def quotient(self, j: int) -> int:
        k = len(self.preperiod)
        if j < k:
            return self.preperiod[j]
        return self.period[(j - k) % len(self.period)]

    def __str__(self) -> str:
        if not self.preperiod:
            return f"periodic:[;|{_fmt_list(self.period)}]"
        a0, rest = self.preperiod[0], self.preperiod[1:]
        return f"periodic:[{a0};{_fmt_list(rest)}|{_fmt_list(self.period)}]"


@dataclass(frozen=True)
class Literal:
    """A decimal approximation with ``guaranteed`` correct fractional digits.

    The represented alpha lies in [x - 10**-guaranteed, x + 10**-guaranteed].
    """

    text: str
    guaranteed: int

    def __post_init__(self):
        try:
            Decimal(self.text)
        except InvalidOperation:
            raise InvalidSpec(f"not a decimal literal: {self.text!r}") from None
        if not re.fullmatch(r"[+-]?\d+(\.\d*)?", self.text.strip()):
            raise InvalidSpec(f"literal must be plain decimal notation: {self.text!r}")
        if self.guaranteed < 1:
            raise InvalidSpec("guaranteed digit count must be >= 1")

    @property
    def value(self) -> Fraction:
        return Fraction(Decimal(self.text))

    @property
    def radius(self) -> Fraction:
        return Fraction(1, 10**self.guaranteed)

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.value - self.radius, self.value + self.radius

    def fractional_digits(self) -> str:
        body = self.text.strip().lstrip("+-")
        frac = body.split(".")[1] if "." in body else ""
        return frac.ljust(self.guaranteed, "0")[: self.guaranteed]

    def looks_rational(self) -> bool:
        digits = self.fractional_digits()
        run = len(digits) - len(digits.rstrip("0"))
        return run >= RATIONAL_LIKE_ZEROS

    def __str__(self) -> str:
        return f"literal:{self.text}:{self.guaranteed}"


@dataclass(frozen=True)
class Rule:
    """Quotients from a deterministic generator after a fixed prefix."""

    prefix: tuple[int, ...]
    rule: str
    params: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "params", tuple(sorted(self.params)))
        if not self.prefix:
            raise InvalidSpec("Rule needs at least a_0 in its prefix")
        _check_quotients(self.prefix, True, "rule prefix")

    @property
    def param_dict(self) -> dict[str, int]:
        return dict(self.params)

    def __str__(self) -> str:
        a0, rest = self.prefix[0], self.prefix[1:]
        out = f"rule:{self.rule}:prefix=[{a0};{_fmt_list(rest)}]"
        for k, v in self.params:
            out += f":{k}={v}"
        return out


AlphaSpec = Union[PeriodicCF, Literal, Rule]

# a rule maps (s, q_s, q_{s-1}, params, digit_cap) to a_{s+1}
RuleFn = Callable[[int, int, int, dict, int], MagnitudeInt]
_RULES: dict[str, RuleFn] = {}


def register_rule(name: str, fn: RuleFn) -> None:
    _RULES[name] = fn


def rule_function(name: str) -> RuleFn:
    if name not in _RULES:
        from . import alpha_gen  # noqa: F401  (registers the built-in rules)
    try:
        return _RULES[name]
    except KeyError:
        raise InvalidSpec(f"unknown generator rule {name!r}") from None


ALIASES = {
    "golden": "periodic:[0;|1]",
    "sqrt2m1": "periodic:[0;|2]",
    "surd12": "periodic:[0;|1,2]",
    "smember": "rule:smember:prefix=[0;2]",
}


def _parse_bracket(body: str) -> tuple[int | None, list[int], list[int] | None]:
    m = re.fullmatch(r"\[\s*([+-]?\d*)\s*;([^|\]]*)(?:\|([^\]]*))?\]", body.strip())
    if not m:
        raise InvalidSpec(f"malformed continued fraction {body!r}")
    a0 = int(m.group(1)) if m.group(1) not in ("", "+", "-") else None

    def ints(chunk):
        chunk = (chunk or "").strip()
        return [int(t) for t in chunk.split(",") if t.strip()] if chunk else []

    return a0, ints(m.group(2)), (ints(m.group(3)) if m.group(3) is not None else None)


def parse_alpha(text: str) -> AlphaSpec:
    """Parse the textual alpha grammar used by the CLI and configs."""
    text = ALIASES.get(text.strip(), text.strip())
    kind, _, rest = text.partition(":")
    try:
        if kind == "periodic":
            a0, pre, per = _parse_bracket(rest)
            if per is None:
                raise InvalidSpec("periodic spec needs '|' before the period")
            preperiod = ([a0] if a0 is not None else []) + pre
            return PeriodicCF(tuple(preperiod), tuple(per))
        if kind == "literal":
            parts = rest.split(":")
            digits_text = parts[0].strip()
            if len(parts) > 1 and parts[1].strip():
                guaranteed = int(parts[1])
            else:
                guaranteed = len(digits_text.split(".")[1]) if "." in digits_text else 0
            return Literal(digits_text, guaranteed)
        if kind == "rule":
            name, _, tail = rest.partition(":")
            prefix: list[int] | None = None
            params = []
            for item in re.split(r":(?![^\[]*\])", tail) if tail else []:
                key, _, val = item.partition("=")
                if key == "prefix":
                    a0, pre, per = _parse_bracket(val)
                    if per is not None or a0 is None:
                        raise InvalidSpec("rule prefix is [a0;a1,...]")
                    prefix = [a0] + pre
                elif key:
                    params.append((key.strip(), int(val)))
            if prefix is None:
                raise InvalidSpec("rule spec needs prefix=[a0;...]")
            rule_function(name)
            return Rule(tuple(prefix), name, tuple(params))
    except ValueError as exc:
        if isinstance(exc, InvalidSpec):
            raise
        raise InvalidSpec(f"cannot parse alpha spec {text!r}: {exc}") from None
    raise InvalidSpec(f"unknown alpha spec kind {kind!r} in {text!r}")


# --------------------------------------------------------------------------
# expansion and convergents
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Convergent:
    s: int
    a: MagnitudeInt | None
    p: MagnitudeInt
    q: MagnitudeInt

    @property
    def exact(self) -> bool:
        return isinstance(self.p, int) and isinstance(self.q, int)


BASE_CONVERGENT = Convergent(-1, None, 1, 0)


def _literal_quotients(spec: Literal, count: int) -> list[int]:
    lo_, hi_ = spec.interval()
    out: list[int] = []
    for _ in range(count + 1):
        a_lo, a_hi = math.floor(lo_), math.floor(hi_)
        if a_lo != a_hi:
            raise PrecisionExhausted(
                f"{spec}: quotient a_{len(out)} not decided by {spec.guaranteed} digits")
        out.append(a_lo)
        f_lo, f_hi = lo_ - a_lo, hi_ - a_lo
        if f_lo <= 0:
            if len(out) == count + 1:
                break
            raise PrecisionExhausted(
                f"{spec}: quotient a_{len(out)} not decided by {spec.guaranteed} digits")
        lo_, hi_ = 1 / f_hi, 1 / f_lo
    return out


@lru_cache(maxsize=256)
def _rule_table(spec: Rule, depth: int, digit_cap: int) -> tuple[Convergent, ...]:
    fn = rule_function(spec.rule)
    params = spec.param_dict
    rows: list[Convergent] = []
    p2, q2 = 1, 0  # s = -1
    p1: MagnitudeInt = spec.prefix[0]
    q1: MagnitudeInt = 1
    rows.append(Convergent(0, spec.prefix[0], p1, q1))
    for s in range(1, depth + 1):
        if s < len(spec.prefix):
            a: MagnitudeInt = spec.prefix[s]
        else:
            q_s, q_prev = rows[s - 1].q, rows[s - 2].q if s >= 2 else 0
            if not isinstance(q_s, int) or not isinstance(q_prev, int):
                raise CapExceeded(
                    f"{spec}: rule needs exact q_{s - 1} to emit a_{s}; it is LogOnly")
            a = fn(s - 1, q_s, q_prev, params, digit_cap)
            if isinstance(a, int) and a < 1:
                raise InvalidSpec(f"{spec}: rule emitted a_{s} = {a} < 1")
        p = _combine(a, p1, p2, digit_cap, f"p_{s}")
        q = _combine(a, q1, q2, digit_cap, f"q_{s}")
        rows.append(Convergent(s, a, p, q))
        p2, q2, p1, q1 = p1, q1, p, q
    return tuple(rows)


def rule_quotients(spec: Rule, count: int,
                   digit_cap: int = DEFAULT_DIGIT_CAP) -> list[MagnitudeInt]:
    return [row.a for row in _rule_table(spec, count, digit_cap)]


def cf_expand(alpha: AlphaSpec, count: int) -> list[int]:
    """Partial quotients a_0..a_count as exact integers."""
    if count < 0:
        raise InvalidSpec("count must be >= 0")
    if isinstance(alpha, PeriodicCF):
        return [alpha.quotient(j) for j in range(count + 1)]
    if isinstance(alpha, Literal):
        return _literal_quotients(alpha, count)
    if isinstance(alpha, Rule):
        out = rule_quotients(alpha, count)
        for j, a in enumerate(out):
            if not isinstance(a, int):
                raise CapExceeded(f"{alpha}: a_{j} is too large to materialize")
        return out
    raise TypeError(f"not an AlphaSpec: {alpha!r}")


def convergents(quotients: Sequence[MagnitudeInt], digit_cap: int = DEFAULT_DIGIT_CAP,
                with_base: bool = False) -> list[Convergent]:
    """Convergents p_s/q_s for s = 0..len(quotients)-1.

    Past the digit cap p and q become :class:`LogOnly`, and the value itself
    records the transition.
    """
    if not quotients:
        return [BASE_CONVERGENT] if with_base else []
    a0 = quotients[0]
    if not isinstance(a0, int):
        raise InvalidSpec("a_0 must be an exact integer")
    rows = [Convergent(0, a0, a0, 1)]
    p2, q2, p1, q1 = 1, 0, a0, 1
    for s in range(1, len(quotients)):
        a = quotients[s]
        if isinstance(a, int) and a < 1:
            raise InvalidSpec(f"partial quotient a_{s} = {a} < 1")
        p = _combine(a, p1, p2, digit_cap, f"p_{s}")
        q = _combine(a, q1, q2, digit_cap, f"q_{s}")
        rows.append(Convergent(s, a, p, q))
        p2, q2, p1, q1 = p1, q1, p, q
    return ([BASE_CONVERGENT] if with_base else []) + rows


@lru_cache(maxsize=256)
def _table(alpha: AlphaSpec, depth: int, digit_cap: int) -> tuple[Convergent, ...]:
    if isinstance(alpha, Rule):
        return _rule_table(alpha, depth, digit_cap)
    return tuple(convergents(cf_expand(alpha, depth), digit_cap))


def convergent_table(alpha: AlphaSpec, depth: int,
                     digit_cap: int = DEFAULT_DIGIT_CAP) -> list[Convergent]:
    """Rows s = 0..depth (cached per alpha)."""
    return list(_table(alpha, depth, digit_cap))


def literal_depth(alpha: Literal) -> int:
    """Deepest index whose quotient the literal decides."""
    depth = 0
    while True:
        try:
            _literal_quotients(alpha, depth + 1)
        except PrecisionExhausted:
            return depth
        depth += 1


def table_reaching(alpha: AlphaSpec, n: int, digit_cap: int = DEFAULT_DIGIT_CAP,
                   max_depth: int = 10_000) -> list[Convergent]:
    """Shortest cached table whose last denominator exceeds ``n``."""
    depth = max(1, len(alpha.prefix) - 1) if isinstance(alpha, Rule) else 8
    while True:
        if isinstance(alpha, Literal):
            depth = min(depth, literal_depth(alpha))
        try:
            rows = convergent_table(alpha, depth, digit_cap)
        except CapExceeded:
            rows = None
        if rows is not None and magnitude_gt(rows[-1].q, n):
            return rows
        if rows is None or depth >= max_depth:
            raise ListTooShort(f"{alpha}: convergents do not reach q > {n}")
        if isinstance(alpha, Literal) and depth >= literal_depth(alpha):
            raise PrecisionExhausted(f"{alpha}: digits do not reach q > {n}")
        if isinstance(alpha, Rule):
            # rule tables grow explosively; extend one row at a time
            depth += 1
        else:
            depth *= 2


def locate_index(n: int, conv: Sequence[Convergent]) -> int:
    """The unique s >= 0 with q_s <= n < q_{s+1}."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    rows = [c for c in conv if c.s >= 0]
    for i in range(len(rows) - 1):
        q_s, q_next = rows[i].q, rows[i + 1].q
        if not isinstance(q_s, int):
            break
        if q_s <= n and magnitude_gt(q_next, n):
            return rows[i].s
    raise ListTooShort(f"convergent list does not bracket n = {n}")


def locate(alpha: AlphaSpec, n: int) -> tuple[int, list[Convergent]]:
    rows = table_reaching(alpha, n)
    return locate_index(n, rows), rows


# --------------------------------------------------------------------------
# certified evaluation
# --------------------------------------------------------------------------


def _moebius_ball(rows: Sequence[Convergent], x: arb) -> arb:
    """[a_0; a_1, ..., a_k, x] from the convergents of the prefix."""
    last = rows[-1]
    prev = rows[-2] if len(rows) >= 2 else BASE_CONVERGENT
    return (to_arb(last.p) * x + to_arb(prev.p)) / (to_arb(last.q) * x + to_arb(prev.q))


def _periodic_ball(alpha: PeriodicCF, bits: int) -> arb:
    with working_precision(bits):
        per = convergents(list(alpha.period))
        last = per[-1]
        prev = per[-2] if len(per) >= 2 else BASE_CONVERGENT
        P, Q, P1, Q1 = last.p, last.q, prev.p, prev.q
        b = P - Q1
        disc = arb(fmpz(b * b + 4 * Q * P1))
        x = (arb(fmpz(b)) + disc.sqrt()) / (2 * arb(fmpz(Q)))
        if not alpha.preperiod:
            return x
        return _moebius_ball(convergents(list(alpha.preperiod)), x)


def _rule_ball(alpha: Rule, bits: int) -> arb:
    target = (bits + 16) * math.log(2)
    depth = max(2, len(alpha.prefix))
    while True:
        try:
            rows = _rule_table(alpha, depth, DEFAULT_DIGIT_CAP)
        except CapExceeded as exc:
            raise PrecisionExhausted(str(exc)) from None
        for i in range(len(rows) - 1):
            cur, nxt = rows[i], rows[i + 1]
            if not cur.exact:
                break
            if cur.q < 1:
                continue
            with working_precision(64):
                reach = ln_magnitude(cur.q) + ln_magnitude(nxt.q)
            if reach.lower() > target:
                with working_precision(bits + 32):
                    centre = arb(fmpz(cur.p)) / arb(fmpz(cur.q))
                    err = arb(2) ** (-(bits + 16))
                    return centre + arb(0, err)
        if not rows[-1].exact:
            raise PrecisionExhausted(f"{alpha}: exact convergents cannot reach {bits} bits")
        depth += 1


def alpha_ball(alpha: AlphaSpec, bits: int) -> arb:
    """Best enclosure of alpha at roughly ``bits`` of relative accuracy."""
    if isinstance(alpha, PeriodicCF):
        w = bits + 32
        while True:
            x = _periodic_ball(alpha, w)
            if x.rad() <= abs(x.mid()) * arb(2) ** (-(bits + 1)) or w > 8 * bits + 256:
                return x
            w *= 2
    if isinstance(alpha, Literal):
        if alpha.looks_rational():
            raise InvalidSpec(f"{alpha} looks like a terminating decimal; alpha must be irrational")
        with working_precision(max(bits, int(alpha.guaranteed * 3.33) + 64)):
            lo_, hi_ = alpha.interval()
            return to_arb(lo_).union(to_arb(hi_))
    if isinstance(alpha, Rule):
        return _rule_ball(alpha, bits)
    raise TypeError(f"not an AlphaSpec: {alpha!r}")


def eval_alpha(alpha: AlphaSpec, precision: int) -> arb:
    """Ball containing alpha with relative width <= 2**(1 - precision)."""
    if precision < 32:
        raise InvalidSpec("precision must be >= 32 bits")
    x = alpha_ball(alpha, precision)
    if not (x.rad() <= x.abs_lower() * arb(2) ** (-precision)):
        raise PrecisionExhausted(f"{alpha}: cannot reach {precision} bits")
    return x


# --------------------------------------------------------------------------
# nearest-integer distances
# --------------------------------------------------------------------------


def _nearest(x: arb) -> tuple[int, arb] | None:
    m = int(x.mid().floor().unique_fmpz()) if x.mid().is_finite() else None
    if m is None:
        return None
    if x.mid() - m > arb(1) / 2:
        m += 1
    half = arb(1) / 2
    if not (x.lower() > m - half and x.upper() < m + half):
        return None
    d = abs(x - m)
    if not d.lower() > 0:
        return None
    return m, d


def _dist_start_bits(alpha: AlphaSpec, n: int) -> int:
    try:
        s, rows = locate(alpha, n)
        nxt = rows[s + 1].q
        log2q = float(ln_magnitude(nxt).upper()) / math.log(2)
        return int(128 + log2q + n.bit_length())
    except (ListTooShort, CapExceeded, PrecisionExhausted, OverflowError):
        return 128 + 2 * n.bit_length()


def dist_to_Z(k: int, alpha: AlphaSpec, prec_cap: int | None = None) -> tuple[int, arb]:
    """(nearest integer to k*alpha, ball for dist(k*alpha, Z)) with 0 < dist < 1/2."""
    if k < 1:
        raise InvalidSpec("k must be >= 1")
    return dists_to_Z(alpha, k, prec_cap)[k - 1]


@lru_cache(maxsize=64)
def _dists(alpha: AlphaSpec, n: int, cap: int) -> tuple[tuple[int, arb], ...]:
    for bits in precision_ladder(_dist_start_bits(alpha, n), cap):
        x = alpha_ball(alpha, bits)
        out = []
        with working_precision(bits):
            for k in range(1, n + 1):
                r = _nearest(k * x)
                if r is None:
                    break
                out.append(r)
        if len(out) == n:
            return tuple(out)
        if isinstance(alpha, Literal):
            break
    raise PrecisionExhausted(f"{alpha}: nearest integers to k*alpha undecided for k <= {n}")


def dists_to_Z(alpha: AlphaSpec, n: int, prec_cap: int | None = None) -> list[tuple[int, arb]]:
    """[(k alpha), dist(k alpha, Z)] for k = 1..n, one shared enclosure of alpha."""
    cap = default_prec_cap() if prec_cap is None else prec_cap
    return list(_dists(alpha, n, cap))


# --------------------------------------------------------------------------
# classical theorems as executable checks
# --------------------------------------------------------------------------


def _approx_error(alpha: AlphaSpec, p: int, q: int, bits: int) -> arb:
    """|q alpha - p| at roughly ``bits`` bits."""
    x = alpha_ball(alpha, bits)
    with working_precision(bits):
        return abs(q * x - p)


def _error_bits(*qs: MagnitudeInt) -> int:
    total = 64
    for q in qs:
        total += int(float(ln_magnitude(q).upper()) / math.log(2)) + 2 if q != 0 else 0
    return total


def _refine(check: Callable[[int], Verdict], start: int, cap: int | None,
            alpha: AlphaSpec) -> Verdict:
    verdict = Verdict.UNDECIDED
    for bits in precision_ladder(start, cap):
        try:
            verdict = check(bits)
        except PrecisionExhausted:
            return Verdict.UNDECIDED
        if verdict is not Verdict.UNDECIDED or isinstance(alpha, Literal):
            return verdict
    return verdict


def psqs_bounds_check(s: int, alpha: AlphaSpec, prec_cap: int | None = None) -> Verdict:
    """(2q_{s+1})^-1 <= (q_{s+1}+q_s)^-1 < |q_s alpha - p_s| < q_{s+1}^-1."""
    if s < 0:
        raise InvalidSpec("s must be >= 0")
    rows = convergent_table(alpha, s + 1)
    cur, nxt = rows[s], rows[s + 1]
    if not cur.exact:
        raise CapExceeded(f"p_{s}, q_{s} are LogOnly")
    p, q = cur.p, cur.q

    def check(bits: int) -> Verdict:
        err = _approx_error(alpha, p, q, bits)
        with working_precision(bits):
            if isinstance(nxt.q, int):
                q1 = nxt.q
                first = Verdict.TRUE if 2 * q1 >= q1 + q else Verdict.FALSE
                return all_verdicts([first, lt(1, err * (q1 + q)), lt(err * q1, 1)])
            # LogOnly q_{s+1}: compare in log space, first inequality holds as q_{s+1} > q_s
            ln_err = err.log() if err.lower() > 0 else None
            if ln_err is None:
                return Verdict.UNDECIDED
            ln_q1 = nxt.q.ln
            # ln(q1 + q) <= ln q1 + q/q1 <= ln q1 + q exp(-ln q1)
            ln_sum_hi = ln_q1 + arb(0).union(arb(fmpz(q)) * (-(ln_q1.lower())).exp())
            return all_verdicts([lt(-ln_sum_hi, ln_err), lt(ln_err, -ln_q1)])

    return _refine(check, _error_bits(q, nxt.q), prec_cap, alpha)


def lagrange_best_check(s: int, alpha: AlphaSpec, exhaustive_q_cap: int = 100_000,
                        prec_cap: int | None = None) -> Verdict:
    """Best-approximation property of the convergents, brute force over q <= q_s."""
    if s < 1:
        raise InvalidSpec("the exhaustive check starts at s = 1")
    rows = convergent_table(alpha, s + 1)
    prev, cur, nxt = rows[s - 1], rows[s], rows[s + 1]
    if not (prev.exact and cur.exact and nxt.exact):
        raise CapExceeded("exhaustive check needs exact convergents")
    if cur.q > exhaustive_q_cap:
        raise CapExceeded(f"q_{s} = {cur.q} exceeds exhaustive cap {exhaustive_q_cap}")
    excluded = {(cur.p, cur.q), (prev.p, prev.q)}

    def check(bits: int) -> Verdict:
        x = alpha_ball(alpha, bits)
        with working_precision(bits):
            target = abs(prev.q * x - prev.p)
            verdicts = [lt(abs(nxt.q * x - nxt.p), abs(cur.q * x - cur.p))]
            worst = None
            for qq in range(1, cur.q + 1):
                qx = qq * x
                base = int(qx.mid().floor().unique_fmpz())
                for pp in (base, base + 1):
                    if (pp, qq) in excluded:
                        continue
                    e = abs(qx - pp)
                    if worst is None or e.lower() < worst.lower():
                        worst = e
            if worst is not None:
                verdicts.append(gt(worst, target))
        return all_verdicts(verdicts)

    return _refine(check, _error_bits(cur.q, nxt.q), prec_cap, alpha)


@dataclass(frozen=True)
class LegendreResult:
    hypothesis: Verdict
    conclusion: Verdict | None  # None when the hypothesis does not hold


def legendre_test(p: int, q: int, alpha: AlphaSpec,
                  prec_cap: int | None = None) -> LegendreResult:
    """If |q alpha - p| < 1/(2q) then p/q must be a convergent."""
    if q < 1:
        raise InvalidSpec("q must be positive")
    if gcd(p, q) != 1:
        raise InvalidSpec(f"{p}/{q} is not in lowest terms")

    def check(bits: int) -> Verdict:
        err = _approx_error(alpha, p, q, bits)
        with working_precision(bits):
            return lt(err * (2 * q), 1)

    hyp = _refine(check, 64 + 4 * q.bit_length(), prec_cap, alpha)
    if hyp is not Verdict.TRUE:
        return LegendreResult(hyp, None)
    rows = table_reaching(alpha, q)
    found = any(isinstance(r.q, int) and r.q == q and r.p == p for r in rows)
    return LegendreResult(hyp, Verdict.TRUE if found else Verdict.FALSE)



def determinant_identity_check(alpha: AlphaSpec, depth: int) -> Verdict:
    """p_s q_{s-1} - p_{s-1} q_s = (-1)^(s+1) for s = 0..depth, exactly."""
    rows = [BASE_CONVERGENT] + convergent_table(alpha, depth)
    for prev, cur in zip(rows, rows[1:]):
        if not all(isinstance(v, int) for v in (prev.p, prev.q, cur.p, cur.q)):
            return Verdict.UNDECIDED
        if cur.p * prev.q - prev.p * cur.q != (-1) ** (cur.s + 1):
            return Verdict.FALSE
    return Verdict.TRUE


def q_growth_check(alpha: AlphaSpec, depth: int) -> Verdict:
    """q_s >= 2^((s-1)/2) for 1 <= s <= depth, as q_s^2 >= 2^(s-1) in integers."""
    for row in convergent_table(alpha, depth)[1:]:
        if not isinstance(row.q, int):
            return Verdict.UNDECIDED
        if row.q * row.q < 2 ** (row.s - 1):
            return Verdict.FALSE
    return Verdict.TRUE


def lagrange_monotone_check(alpha: AlphaSpec, depth: int,
                            prec_cap: int | None = None) -> Verdict:
    """|q_{s+1} alpha - p_{s+1}| < |q_s alpha - p_s| for 0 <= s < depth."""
    rows = convergent_table(alpha, depth)
    if not all(r.exact for r in rows[: depth + 1]):
        raise CapExceeded("monotonicity check needs exact convergents")

    def check(bits: int) -> Verdict:
        errs = [_approx_error(alpha, r.p, r.q, bits) for r in rows[: depth + 1]]
        with working_precision(bits):
            return all_verdicts(lt(b, a) for a, b in zip(errs, errs[1:]))

    return _refine(check, _error_bits(rows[depth].q, rows[depth].q), prec_cap, alpha)
