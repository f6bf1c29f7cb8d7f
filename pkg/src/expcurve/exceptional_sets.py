"""Finite-horizon diagnostics for the exceptional set S and the sets T(eps), U(eps).

Nothing here decides a limsup. Every report carries its horizon, and a
threshold crossing is reported as "score exceeded T at s=...", never as
membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from flint import acb, arb

from .alpha_gen import diophantine_profile
from .balls import (
    Verdict, all_verdicts, exact_fraction, ge, le, lt, overlap, precision_ladder, to_arb,
    working_precision,
)
from .cf_core import AlphaSpec, Literal, alpha_ball, convergent_table, ln_magnitude
from .errors import CapExceeded, DomainError, InvalidSpec, PrecisionExhausted
from .transcendence.bounds import en_lower, en_upper

SETS_PREC = 128


# epsilon sequences --------------------------------------------------------------


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


X_SEQUENCES = {
    "one": lambda n: arb(1),
    "log": lambda n: arb(n + 1).log(),
    "sqrt": lambda n: arb(n).sqrt(),
}


@dataclass(frozen=True)
class EpsilonSeq:
    """eps(n) > 0.

    kind "power": n^-exponent. kind "paper_remark": n^-2 at powers of two and
    n^-3 elsewhere. kind "scaled_inverse": 1 / (x(n) n^2 ln n) for a named x.
    """

    kind: str
    exponent: int = 3
    x: str = "one"

    def __post_init__(self):
        if self.kind not in ("power", "paper_remark", "scaled_inverse"):
            raise InvalidSpec(f"unknown epsilon kind {self.kind!r}")
        if self.kind == "scaled_inverse" and self.x not in X_SEQUENCES:
            raise InvalidSpec(f"unknown x-sequence {self.x!r}")

    @classmethod
    def parse(cls, text: str) -> "EpsilonSeq":
        """"power:3", "paper_remark", "scaled_inverse:one"."""
        head, _, arg = text.partition(":")
        if head == "power":
            try:
                return cls("power", exponent=int(arg or 3))
            except ValueError:
                raise InvalidSpec(f"bad exponent in {text!r}") from None
        if head == "paper_remark":
            return cls("paper_remark")
        if head == "scaled_inverse":
            return cls("scaled_inverse", x=arg or "one")
        raise InvalidSpec(f"unknown epsilon sequence {text!r}")

    def __str__(self) -> str:
        if self.kind == "power":
            return f"power:{self.exponent}"
        if self.kind == "scaled_inverse":
            return f"scaled_inverse:{self.x}"
        return "paper_remark"

    def defined_at(self, n: int) -> bool:
        return n >= 1 and (self.kind != "scaled_inverse" or n >= 2)

    def __call__(self, n: int) -> arb:
        if not self.defined_at(n):
            raise DomainError(f"eps({n}) undefined for {self}")
        if self.kind == "power":
            return arb(n) ** (-self.exponent)
        if self.kind == "paper_remark":
            return arb(n) ** (-2 if is_power_of_two(n) else -3)
        return 1 / (X_SEQUENCES[self.x](n) * n * n * arb(n).log())


# h-function and covering sums --------------------------------------------------------


@dataclass(frozen=True)
class HFunction:
    """h(r) = 1 / (ln(1/r) (ln ln ln(1/r))^p)."""

    p: float

    def from_log(self, L: arb) -> arb:
        """h at r = e^-L; needs ln ln L > 0, that is L > e."""
        L = to_arb(L)
        if not L > arb(1).exp():
            raise DomainError("h needs ln ln ln(1/r) > 0")
        return 1 / (L * L.log().log() ** arb(self.p))

    def __call__(self, r) -> arb:
        r = to_arb(r)
        if not r > 0:
            raise DomainError("h needs r > 0")
        return self.from_log(-r.log())


def hausdorff_term(h: HFunction, n: int) -> arb:
    """n h(r(n)) with r(n) = n^(-n^2)."""
    if n < 3:
        raise DomainError("the triple log needs n >= 3")
    with working_precision(SETS_PREC):
        return n * h.from_log(n * n * arb(n).log())


@dataclass(frozen=True)
class HausdorffReport:
    p: float
    N: int
    M: int
    partial_sum: arb
    tail_bound: arb  # sum over n > M, by integral comparison; inf when p <= 1
    blocks: tuple  # ((lo, hi, block sum), ...) over decades
    block_ratios: tuple
    decreasing_blocks: bool


def hausdorff_tail(h: HFunction, N: int, M: int) -> HausdorffReport:
    """sum_{n=N}^M n h(n^-n^2), decade blocks and a tail bound.

    With ln ln(n^2 ln n) >= ln(2 ln n) each term is at most
    1 / (n ln n ln(2 ln n)^p), whose integral past M is u^(1-p)/(p-1) at u = ln(2 ln M).
    """
    if N < 3:
        raise DomainError("hausdorff_tail needs N >= 3")
    if M < N:
        raise InvalidSpec("need M >= N")
    with working_precision(SETS_PREC):
        total = arb(0)
        blocks = []
        edge = 10 ** max(1, len(str(N)) - 1)
        while edge <= N:
            edge *= 10
        block_lo, block = N, arb(0)
        for n in range(N, M + 1):
            if n == edge:
                blocks.append((block_lo, n - 1, block))
                block_lo, block = n, arb(0)
                edge *= 10
            term = hausdorff_term(h, n)
            total += term
            block += term
        blocks.append((block_lo, M, block))
        if h.p > 1:
            u = (2 * arb(M).log()).log()
            tail = u ** (1 - arb(h.p)) / (arb(h.p) - 1)
        else:
            tail = arb("inf")
    ratios = tuple(b[2] / a[2] for a, b in zip(blocks, blocks[1:]))
    # the last block is usually partial, so the pattern uses full decades only
    full = [b for b in blocks if len(str(b[0])) == len(str(b[1])) and b[1] - b[0] + 1 == 9 * b[0]]
    decreasing = all(lt(y[2], x[2]) is Verdict.TRUE for x, y in zip(full, full[1:]))
    return HausdorffReport(h.p, N, M, total, tail, tuple(blocks), ratios, decreasing)


def cover_radius_log(n: int, which: str) -> arb:
    """-ln r(n) = n^2 ln n for A, n^3 for A'."""
    if which == "A":
        return n * n * arb(n).log()
    if which == "A'":
        return arb(n) ** 3
    raise InvalidSpec("which must be 'A' or \"A'\"")


def cover_membership(alpha: AlphaSpec, n: int, which: str = "A",
                     prec_cap: int | None = None) -> tuple[Verdict, int]:
    """Is |alpha - m/n| < r(n) for an admissible m in 1..n? Returns (verdict, best m)."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    if which not in ("A", "A'"):
        raise InvalidSpec("which must be 'A' or \"A'\"")
    for bits in precision_ladder(SETS_PREC, prec_cap):
        with working_precision(bits):
            a = alpha_ball(alpha, bits)
            candidates = range(1, n + 1)
            if which == "A'":
                candidates = [m for m in candidates if gcd(m, n) == 1]
            best_m, best = None, None
            for m in candidates:
                d = abs(a - arb(m) / n)
                if best is None or d.upper() < best.lower():
                    best_m, best = m, d
                elif not d.lower() > best.upper():
                    # not separated yet: keep the one with the smaller midpoint
                    if float(d.mid()) < float(best.mid()):
                        best_m, best = m, d
            bound = (-cover_radius_log(n, which)).exp()
            verdict = lt(best, bound)
            if verdict is not Verdict.UNDECIDED:
                return verdict, best_m
    raise PrecisionExhausted(f"membership in {which}_{n} undecided at the cap")


def synthetic_member(m0: int, n0: int, which: str = "A'", digits: int | None = None) -> Literal:
    """A literal alpha = m0/n0 + r(n0)/2, inside the covering interval around m0/n0."""
    with working_precision(SETS_PREC + 4 * n0 ** 3):
        r = (-cover_radius_log(n0, which)).exp()
        x = arb(m0) / n0 + r / 2
        if digits is None:
            digits = int(float(cover_radius_log(n0, which).upper()) / math.log(10)) + 12
        frac = exact_fraction(arb(x.mid()))
    whole, rest = divmod(frac.numerator * 10**digits, frac.denominator)
    text = f"{whole // 10**digits}.{str(whole % 10**digits).zfill(digits)}1"
    return Literal(text, digits)


# potential ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PotentialReport:
    zeta: tuple[Fraction, Fraction]
    M: int
    value: arb | None  # None with minus_infinity set
    minus_infinity: bool
    node: tuple[int, int] | None
    lower_bound: arb  # -ln 3 sum_{n<=M} n eps(n)
    nonincreasing: Verdict
    above_lower_bound: Verdict
    partial_sums: tuple = ()


def lower_bound_applies(zeta: tuple[Fraction, Fraction]) -> bool:
    """-ln 3 sum n eps(n) bounds v_M only when every node m/n is at distance >= 1,
    that is when the segment [0, 1] stays outside the open unit disk around zeta."""
    re, im = zeta
    nearest = min(max(re, Fraction(0)), Fraction(1))
    return (re - nearest) ** 2 + im ** 2 >= 1


def _node_hit(zeta: tuple[Fraction, Fraction], M: int) -> tuple[int, int] | None:
    re, im = zeta
    if im != 0 or not 0 < re <= 1 or re.denominator > M:
        return None
    return re.numerator, re.denominator


def inner_log_sum(zeta: acb, n: int) -> arb:
    """sum_{m=1}^n ln|zeta - m/n| = ln|Gamma(n+1-n zeta)| - ln|Gamma(1-n zeta)| - n ln n."""
    w = 1 - n * zeta
    return (w + n).lgamma().real - w.lgamma().real - n * arb(n).log()


def inner_log_sum_direct(zeta: acb, n: int) -> arb:
    total = arb(0)
    for m in range(1, n + 1):
        total += abs(zeta - arb(m) / n).log()
    return total


def polar_potential(zeta, eps: EpsilonSeq, M: int, keep_partials: bool = False,
                    direct: bool = False) -> PotentialReport:
    """v_M(zeta) = sum_{n<=M} eps(n) sum_{m<=n} ln(|zeta - m/n| / 3)."""
    if M < 1:
        raise InvalidSpec("M must be >= 1")
    if isinstance(zeta, complex):
        zeta = (Fraction(zeta.real), Fraction(zeta.imag))
    elif not isinstance(zeta, tuple):
        zeta = (Fraction(zeta), Fraction(0))
    zeta = (Fraction(zeta[0]), Fraction(zeta[1]))
    if zeta[0] ** 2 + zeta[1] ** 2 >= 4:
        raise DomainError("the potential bound needs |zeta| < 2")
    with working_precision(SETS_PREC):
        lower = arb(0)
        for n in range(1, M + 1):
            lower -= arb(3).log() * n * eps(n)
        node = _node_hit(zeta, M)
        if node is not None:
            return PotentialReport(zeta, M, None, True, node, lower, Verdict.TRUE,
                                   Verdict.TRUE)
        z = acb(to_arb(zeta[0]), to_arb(zeta[1]))
        ln3 = arb(3).log()
        total = arb(0)
        steps = []
        partials = []
        for n in range(1, M + 1):
            inner = inner_log_sum_direct(z, n) if direct else inner_log_sum(z, n)
            term = eps(n) * (inner - n * ln3)
            steps.append(le(term, 0))
            total += term
            if keep_partials:
                partials.append(total)
        return PotentialReport(zeta, M, total, False, None, lower, all_verdicts(steps),
                               ge(total, lower), tuple(partials))


# trajectories ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    label: str
    rows: tuple  # (index, value ball)
    horizon: int
    threshold: float | None
    first_exceeding: int | None

    def message(self) -> str:
        if self.threshold is None:
            return f"{self.label}: horizon {self.horizon}"
        if self.first_exceeding is None:
            return f"{self.label}: stayed below threshold {self.threshold} up to {self.horizon}"
        return f"{self.label} exceeded threshold {self.threshold} at {self.first_exceeding}"


def _first_over(rows, threshold):
    if threshold is None:
        return None
    for idx, v in rows:
        if v is not None and v > threshold:
            return idx
    return None


def s_score_trajectory(alpha: AlphaSpec, S: int, threshold: float | None = None) -> Trajectory:
    """ln q_{s+1} / (q_s^2 ln q_s) for s <= S; rows with q_s = 1 carry None."""
    profile = diophantine_profile(alpha, S)
    rows = tuple((r.s, r.s_score) for r in profile.rows)
    horizon = profile.rows[-1].s if profile.rows else 0
    return Trajectory("S-score", rows, horizon, threshold, _first_over(rows, threshold))


def _rows(alpha: AlphaSpec, S: int):
    from .alpha_gen import _deepest_table
    from .cf_core import DEFAULT_DIGIT_CAP

    return _deepest_table(alpha, S + 1, DEFAULT_DIGIT_CAP)


def t_trajectory(alpha: AlphaSpec, eps: EpsilonSeq, S: int,
                 threshold: float | None = None) -> Trajectory:
    """eps(q_s) ln q_{s+1}; rows where eps(q_s) is undefined or q_s is LogOnly carry None."""
    table = _rows(alpha, S)
    out = []
    with working_precision(SETS_PREC):
        for s in range(1, min(S, len(table) - 2) + 1):
            q = table[s].q
            if not isinstance(q, int) or not eps.defined_at(q):
                out.append((s, None))
                continue
            out.append((s, eps(q) * ln_magnitude(table[s + 1].q)))
    rows = tuple(out)
    horizon = rows[-1][0] if rows else 0
    return Trajectory(f"T({eps})", rows, horizon, threshold, _first_over(rows, threshold))


def u_rows(alpha: AlphaSpec, eps: EpsilonSeq, n_list) -> tuple:
    """(n, eps(n) en_lower(n), eps(n) en_upper(n))."""
    out = []
    with working_precision(SETS_PREC):
        for n in n_list:
            if not eps.defined_at(n):
                continue
            e = eps(n)
            out.append((n, e * en_lower(n, alpha), e * en_upper(n, alpha)))
    return tuple(out)


def remark_rows(k_max: int) -> tuple:
    """(k, eps(n)(n^2 ln n/2 - n^2) at n = 2^k, (k ln 2)/2 - 1, overlap verdict)."""
    eps = EpsilonSeq("paper_remark")
    out = []
    with working_precision(SETS_PREC):
        for k in range(1, k_max + 1):
            n = 2**k
            value = eps(n) * (n * n * arb(n).log() / 2 - n * n)
            formula = k * arb(2).log() / 2 - 1
            out.append((k, value, formula, overlap(value, formula)))
    return tuple(out)


@dataclass(frozen=True)
class TUReport:
    alpha: str
    eps: str
    t: Trajectory
    u: tuple
    remark: tuple
    score_match: Verdict  # T-trajectory vs S-score when eps = 1/(n^2 ln n)


def tu_diagnostic(alpha: AlphaSpec, eps: EpsilonSeq, S: int, n_list=(),
                  threshold: float | None = None, remark_k: int = 20) -> TUReport:
    t = t_trajectory(alpha, eps, S, threshold)
    match = Verdict.TRUE
    if eps.kind == "scaled_inverse" and eps.x == "one":
        scores = dict(s_score_trajectory(alpha, S).rows)
        checks = []
        for s, v in t.rows:
            sc = scores.get(s)
            if v is None or sc is None:
                continue
            checks.append(overlap(v, sc))
        match = all_verdicts(checks)
    remark = remark_rows(remark_k) if eps.kind == "paper_remark" else ()
    return TUReport(str(alpha), str(eps), t, u_rows(alpha, eps, n_list), remark, match)


# growth regularity ----------------------------------------------------------------------


@dataclass(frozen=True)
class EnregReport:
    alpha: str
    C: arb | None
    horizon: int
    consistency: tuple  # (s, q_s, verdict) for ln q_{s+1} - q_s <= en_upper(q_s)
    growth: tuple  # (n, en_upper(n), (C+10) n^2 ln n, verdict) for n = 2..n_max
    skipped: tuple  # rows excluded, with the reason

    @property
    def consistency_verdict(self) -> Verdict:
        return all_verdicts(v for *_, v in self.consistency)

    def growth_verdict(self, n_from: int = 2) -> Verdict:
        return all_verdicts(v for n, *_, v in self.growth if n >= n_from)

    def failing_growth_rows(self) -> list[int]:
        return [n for n, *_, v in self.growth if v is not Verdict.TRUE]


def enreg_diagnostic(alpha: AlphaSpec, S: int, n_max: int = 200) -> EnregReport:
    """The two inequalities behind the growth-regularity corollary, at finite horizon.

    C is the horizon max of ln q_{s+1} / (q_s^2 ln q_s) over rows with q_s >= 2.
    """
    if S < 2:
        raise InvalidSpec("S must be >= 2")
    table = _rows(alpha, S)
    skipped = []
    consistency = []
    scores = []
    with working_precision(SETS_PREC):
        for s in range(1, min(S, len(table) - 2) + 1):
            q = table[s].q
            if not isinstance(q, int):
                skipped.append((f"s={s}", "q_s is LogOnly"))
                continue
            ln_q1 = ln_magnitude(table[s + 1].q)
            try:
                bound = en_upper(q, alpha)
            except CapExceeded:
                skipped.append((f"s={s}", "q_{s+1} beyond the exact table"))
                continue
            consistency.append((s, q, le(ln_q1 - q, bound)))
            if q >= 2:
                scores.append(ln_q1 / (arb(q) ** 2 * arb(q).log()))
            else:
                skipped.append((f"s={s}", "q_s = 1 gives ln q_s = 0 in the score"))
        C = None
        for v in scores:
            C = v if C is None else C.max(v)
        growth = []
        skipped.append(("n=1", "n^2 ln n = 0"))
        if C is not None:
            for n in range(2, n_max + 1):
                up = en_upper(n, alpha)
                rhs = (C + 10) * n * n * arb(n).log()
                growth.append((n, up, rhs, le(up, rhs)))
    horizon = consistency[-1][0] if consistency else 0
    return EnregReport(str(alpha), C, horizon, tuple(consistency), tuple(growth), tuple(skipped))
