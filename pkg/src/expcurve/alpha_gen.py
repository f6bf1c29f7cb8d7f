"""Test irrationals: quadratic surds, fast Liouville-type rules, members of S.

A rule is a deterministic map from (s, q_s, q_{s-1}, params) to a_{s+1}.
When the emitted quotient would not fit under the digit cap it is returned
as a :class:`LogOnly` magnitude, so later denominators degrade gracefully.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from flint import arb, fmpz

from .balls import Verdict, interval_strings, lt, working_precision
from .cf_core import (
    DEFAULT_DIGIT_CAP,
    LOG_PREC,
    AlphaSpec,
    Convergent,
    LogOnly,
    MagnitudeInt,
    PeriodicCF,
    Rule,
    convergent_table,
    ln_magnitude,
    register_rule,
)
from .errors import CapExceeded, InvalidSpec, PrecisionExhausted

_LN2 = math.log(2)


def make_quadratic(preperiod: Sequence[int], period: Sequence[int]) -> PeriodicCF:
    return PeriodicCF(tuple(preperiod), tuple(period))


def _power_of_two(exponent: int, digit_cap: int, note: str) -> MagnitudeInt:
    if exponent <= int(digit_cap / math.log10(2)):
        return 1 << exponent
    with working_precision(LOG_PREC):
        return LogOnly(arb(fmpz(exponent)) * arb(2).log(), note)


def smember_exponent(s: int, q: int) -> int:
    """ceil(s * q^2 * log2 q), decided exactly."""
    if q < 2:
        raise InvalidSpec("smember rule needs q_s >= 2")
    if q & (q - 1) == 0:
        return s * q * q * (q.bit_length() - 1)
    # log2 q is irrational here, so the ceiling is decided at some precision
    scale = s * q * q
    bits = 2 * scale.bit_length() + 64
    while True:
        with working_precision(bits):
            x = arb(fmpz(scale)) * arb(fmpz(q)).log() / arb(2).log()
            lo_c = x.lower().ceil().unique_fmpz() if x.lower().is_finite() else None
            hi_c = x.upper().ceil().unique_fmpz()
            if lo_c is not None and lo_c == hi_c:
                return int(lo_c)
        bits *= 2
        if bits > 1 << 24:
            raise PrecisionExhausted("cannot decide smember exponent")


def _smember(s: int, q_s: int, q_prev: int, params: dict, digit_cap: int) -> MagnitudeInt:
    return _power_of_two(smember_exponent(s, q_s), digit_cap, f"a_{s + 1} = 2^E")


def _liouville_fast(s: int, q_s: int, q_prev: int, params: dict,
                    digit_cap: int) -> MagnitudeInt:
    e = max(1, s) * params.get("scale", 1)
    if q_s < 2:
        return 2
    if e <= digit_cap and e * decimal_log10(q_s) <= digit_cap:
        return q_s ** e
    with working_precision(LOG_PREC):
        return LogOnly(e * arb(fmpz(q_s)).log(), f"a_{s + 1} = q_s^{e}")


def decimal_log10(q: int) -> float:
    return q.bit_length() * math.log10(2)


register_rule("smember", _smember)
register_rule("liouville_fast", _liouville_fast)


def register_custom_rule(name: str, fn: Callable[[int, int, int, dict, int], MagnitudeInt]):
    """Register a deterministic rule under ``name`` for use as rule:<name>:..."""
    if name in ("smember", "liouville_fast"):
        raise InvalidSpec(f"{name!r} is a built-in rule")

    def checked(s, q_s, q_prev, params, digit_cap):
        a = fn(s, q_s, q_prev, params, digit_cap)
        if isinstance(a, int) and a < 1:
            raise InvalidSpec(f"rule {name!r} emitted a_{s + 1} = {a} < 1")
        return a

    register_rule(name, checked)


def make_s_member(prefix: Sequence[int]) -> Rule:
    prefix = tuple(prefix)
    if len(prefix) < 2 or prefix[1] < 2:
        raise InvalidSpec("smember prefix must define q_1 >= 2")
    return Rule(prefix, "smember")


# --------------------------------------------------------------------------
# profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileRow:
    s: int
    q_s: MagnitudeInt
    ln_q_s: arb
    ln_q_s1: arb
    mu_s: arb | None
    liouville_ratio: arb | None
    s_score: arb | None
    ln_C_s: arb | None  # ln(q_{s+1} / q_s^(mu-1)) for the supplied mu


@dataclass(frozen=True)
class DiophantineProfile:
    alpha: str
    rows: tuple[ProfileRow, ...]
    mu: float | None

    def running_max(self, field: str) -> list[arb | None]:
        out, best = [], None
        for row in self.rows:
            v = getattr(row, field)
            if v is not None:
                best = v if best is None else best.max(v)
            out.append(best)
        return out

    def ln_C_horizon(self) -> arb | None:
        vals = [r.ln_C_s for r in self.rows if r.ln_C_s is not None]
        if not vals:
            return None
        best = vals[0]
        for v in vals[1:]:
            best = best.max(v)
        return best

    def strictly_increasing_scores(self) -> Verdict:
        scores = [r.s_score for r in self.rows if r.s_score is not None]
        verdicts = [lt(a, b) for a, b in zip(scores, scores[1:])]
        if not verdicts:
            return Verdict.UNDECIDED
        if all(v is Verdict.TRUE for v in verdicts):
            return Verdict.TRUE
        if any(v is Verdict.FALSE for v in verdicts):
            return Verdict.FALSE
        return Verdict.UNDECIDED

    def csv_rows(self) -> list[dict]:
        def fmt(x):
            return "" if x is None else "[" + ",".join(interval_strings(x, 17)) + "]"

        return [
            {
                "s": r.s,
                "ln_q_s": fmt(r.ln_q_s),
                "ln_q_s1": fmt(r.ln_q_s1),
                "mu_s": fmt(r.mu_s),
                "liouville_ratio": fmt(r.liouville_ratio),
                "s_score": fmt(r.s_score),
            }
            for r in self.rows
        ]


PROFILE_COLUMNS = ("s", "ln_q_s", "ln_q_s1", "mu_s", "liouville_ratio", "s_score")


def profile_row(s: int, cur: Convergent, nxt: Convergent, mu: float | None) -> ProfileRow:
    with working_precision(LOG_PREC):
        ln_q = ln_magnitude(cur.q)
        ln_q1 = ln_magnitude(nxt.q)
        ln_C = None
        if mu is not None:
            ln_C = ln_q1 - (arb(mu) - 1) * ln_q
        if not ln_q > 0:
            # q_s = 1: every ratio divides by ln q_s = 0
            return ProfileRow(s, cur.q, ln_q, ln_q1, None, None, None, ln_C)
        ratio = ln_q1 / ln_q
        if isinstance(cur.q, int):
            q_sq = arb(fmpz(cur.q)) ** 2
        else:
            q_sq = (2 * cur.q.ln).exp()
        score = ln_q1 / (q_sq * ln_q)
        return ProfileRow(s, cur.q, ln_q, ln_q1, 1 + ratio, ratio, score, ln_C)


def diophantine_profile(alpha: AlphaSpec, S: int, mu: float | None = None,
                        digit_cap: int = DEFAULT_DIGIT_CAP) -> DiophantineProfile:
    """Rows s = 1..S (stops early, without error, where a rule needs a LogOnly q)."""
    if S < 2:
        raise InvalidSpec("profile depth S must be >= 2")
    rows = _deepest_table(alpha, S + 1, digit_cap)
    out = [profile_row(s, rows[s], rows[s + 1], mu) for s in range(1, min(S, len(rows) - 2) + 1)]
    return DiophantineProfile(str(alpha), tuple(out), mu)


def _deepest_table(alpha: AlphaSpec, depth: int, digit_cap: int) -> list[Convergent]:
    try:
        return convergent_table(alpha, depth, digit_cap)
    except CapExceeded:
        # a rule cannot continue past a LogOnly denominator; keep what exists
        for d in range(depth - 1, 0, -1):
            try:
                return convergent_table(alpha, d, digit_cap)
            except CapExceeded:
                continue
        raise


def logonly_cross_check(alpha: AlphaSpec, depth: int) -> tuple[int, Verdict]:
    """At the deepest exact q_s, ln(exact q_s) must lie in an independent LogOnly bracket.

    The bracket is rebuilt from ln a_s and ln q_{s-1} alone, exactly as the
    LogOnly path would do it.
    """
    rows = _deepest_table(alpha, depth, DEFAULT_DIGIT_CAP)
    exact = [r for r in rows if isinstance(r.q, int) and r.s >= 2]
    if not exact:
        raise CapExceeded("no exact denominator beyond q_1")
    row = exact[-1]
    prev, prev2 = rows[row.s - 1], rows[row.s - 2]
    with working_precision(LOG_PREC):
        a = row.a
        base = ln_magnitude(a) + ln_magnitude(prev.q)
        slack = arb(fmpz(prev2.q)) / (arb(fmpz(a)) * arb(fmpz(prev.q)))
        bracket = base + arb(0).union(slack)
        exact_ln = ln_magnitude(row.q)
    ok = bracket.contains(exact_ln) or bracket.overlaps(exact_ln)
    return row.s, Verdict.TRUE if ok else Verdict.FALSE
