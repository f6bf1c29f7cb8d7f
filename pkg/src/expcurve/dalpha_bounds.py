"""D_alpha(n) = prod_{k<=n} dist(k alpha, Z) and the product lemmas built on it.

Everything is accumulated in log space, in ascending index order, so that
repeated runs give bit-identical balls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from flint import arb, fmpz

from .balls import Verdict, all_verdicts, ge, le, working_precision
from .cf_core import (
    AlphaSpec,
    Convergent,
    LogOnly,
    dists_to_Z,
    ln_magnitude,
    locate,
)
from .errors import CapExceeded, InvalidSpec

SUM_PREC = 192


@dataclass(frozen=True)
class ProductReport:
    n: int
    ln_lhs: arb
    ln_rhs_bound: arb
    verdict: Verdict
    m: int | None = None
    witness: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# ln D_alpha(n)
# --------------------------------------------------------------------------

_PREFIX: dict[AlphaSpec, tuple[arb, ...]] = {}


def ln_d_prefix(alpha: AlphaSpec, n: int) -> tuple[arb, ...]:
    """(ln D(0), ..., ln D(n)) with ln D(0) = 0 (empty product)."""
    if n < 0:
        raise InvalidSpec("n must be >= 0")
    cached = _PREFIX.get(alpha)
    if cached is not None and len(cached) > n:
        return cached[: n + 1]
    dists = dists_to_Z(alpha, max(n, 1))
    out = [arb(0)]
    with working_precision(SUM_PREC):
        acc = arb(0)
        for _, d in dists[:n]:
            acc = acc + d.log()
            out.append(acc)
    _PREFIX[alpha] = tuple(out)
    return tuple(out)


def d_alpha(n: int, alpha: AlphaSpec) -> arb:
    """Ball for ln D_alpha(n)."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    return ln_d_prefix(alpha, n)[n]


def d_alpha_direct(n: int, alpha: AlphaSpec, bits: int = 512) -> arb:
    """Oracle: the plain product at high precision, then one log."""
    prod = arb(1)
    with working_precision(bits):
        for _, d in dists_to_Z(alpha, n):
            prod = prod * d
        return prod.log()


def _ln_q(x) -> arb:
    with working_precision(SUM_PREC):
        return ln_magnitude(x)


def _theorem_tail(n: int, rows: Sequence[Convergent], s: int) -> arb:
    """(n / q_s) ln q_{s+1}."""
    q_s = rows[s].q
    if not isinstance(q_s, int):
        raise CapExceeded(f"q_{s} is LogOnly")
    with working_precision(SUM_PREC):
        return arb(n) / arb(fmpz(q_s)) * _ln_q(rows[s + 1].q)


# --------------------------------------------------------------------------
# single-factor lemma
# --------------------------------------------------------------------------


def _xlogx_minus(t: int, shift: arb) -> arb:
    """t (ln t - shift) with 0 ln 0 := 0."""
    if t == 0:
        return arb(0)
    return t * (arb(t).log() - shift)


def factorial_bound(x: int, y: int, inside: bool) -> arb:
    """ln of the displayed bound; dist(k alpha, Z) is excluded from the inside branch."""
    with working_precision(SUM_PREC):
        if inside:
            return _xlogx_minus(y - x, arb(2).log() + 1)
        return _xlogx_minus(y - x, arb(1)) - arb(2).log()


def lemma_factorial_check(x: int, y: int, k: int, alpha: AlphaSpec) -> ProductReport:
    """prod_{j=x}^y |j - k alpha| against the branch bound (0^0 := 1)."""
    if x > y:
        raise InvalidSpec("need x <= y")
    if k < 1:
        raise InvalidSpec("need k >= 1")
    j0, dist = dists_to_Z(alpha, k)[k - 1]
    x_ball = None
    from .cf_core import alpha_ball

    with working_precision(SUM_PREC + 64):
        x_ball = k * alpha_ball(alpha, SUM_PREC + 64)
        inside = x <= j0 <= y
        rest = arb(0)
        for j in range(x, y + 1):
            if j != j0:
                rest = rest + abs(j - x_ball).log()
        bound = factorial_bound(x, y, inside)
        ln_dist = dist.log()
        # the dist factor is common to both sides of the inside branch
        verdict = le(bound, rest)
        ln_lhs = rest + ln_dist if inside else rest
        ln_rhs = bound + ln_dist if inside else bound
        proof_side = arb(y - x + 1).lgamma() - arb(2).log()
    return ProductReport(
        n=y - x, ln_lhs=ln_lhs, ln_rhs_bound=ln_rhs, verdict=verdict,
        witness={"x": x, "y": y, "k": k, "nearest": j0, "inside": inside,
                 "ln_half_factorial": proof_side},
    )


def lemma_factorial_grid(alpha: AlphaSpec, lo_: int = -20, hi_: int = 20,
                         k_max: int = 50) -> dict:
    """All x <= y in [lo_, hi_], 1 <= k <= k_max, sharing one ln|j - k alpha| table per k."""
    from .cf_core import alpha_ball

    counts = {Verdict.TRUE: 0, Verdict.FALSE: 0, Verdict.UNDECIDED: 0}
    failures = []
    dists = dists_to_Z(alpha, k_max)
    width = hi_ - lo_
    with working_precision(SUM_PREC + 64):
        a = alpha_ball(alpha, SUM_PREC + 64)
        bounds_in = [factorial_bound(0, t, True) for t in range(width + 1)]
        bounds_out = [factorial_bound(0, t, False) for t in range(width + 1)]
        for k in range(1, k_max + 1):
            j0 = dists[k - 1][0]
            ka = k * a
            logs = [arb(0) if j == j0 else abs(j - ka).log() for j in range(lo_, hi_ + 1)]
            prefix = [arb(0)]
            for v in logs:
                prefix.append(prefix[-1] + v)
            for x in range(lo_, hi_ + 1):
                for y in range(x, hi_ + 1):
                    inside = x <= j0 <= y
                    if x == y and inside:
                        rest = arb(0)  # empty product once dist is factored out
                    else:
                        rest = prefix[y - lo_ + 1] - prefix[x - lo_]
                    bound = (bounds_in if inside else bounds_out)[y - x]
                    v = le(bound, rest)
                    counts[v] += 1
                    if v is not Verdict.TRUE and len(failures) < 10:
                        failures.append((x, y, k, str(v)))
    verdict = (Verdict.FALSE if counts[Verdict.FALSE] else
               Verdict.UNDECIDED if counts[Verdict.UNDECIDED] else Verdict.TRUE)
    return {"alpha": str(alpha), "checked": sum(counts.values()),
            "counts": {str(k): v for k, v in counts.items()},
            "failures": failures, "verdict": verdict}


# --------------------------------------------------------------------------
# D_alpha(n) lemmas
# --------------------------------------------------------------------------


def partition_sets(n: int, alpha: AlphaSpec) -> tuple[int, list[list[int]]]:
    """s and the sets S_0..S_{s+1} of the lower-bound proof for D_alpha(n)."""
    s, rows = locate(alpha, n)
    dists = dists_to_Z(alpha, n)
    targets = {}
    for j in range(s + 1):
        r = rows[j]
        targets.setdefault(Fraction(r.p, r.q), j)
    sets: list[list[int]] = [[] for _ in range(s + 2)]
    for k in range(1, n + 1):
        j = targets.get(Fraction(dists[k - 1][0], k))
        sets[s + 1 if j is None else j].append(k)
    return s, sets


def partition_check(n: int, alpha: AlphaSpec) -> dict:
    """Side conditions of the proof: sizes, divisibility, disjointness, far-set distances."""
    s, sets = partition_sets(n, alpha)
    rows = locate(alpha, n)[1]
    q_s = rows[s].q
    dists = dists_to_Z(alpha, n)
    flat = [k for part in sets for k in part]
    checks = {
        "sum_sizes": len(flat) == n,
        "disjoint": len(set(flat)) == len(flat),
        "S_s_size": len(sets[s]) * q_s <= n,
        "S_s_divisible": all(k % q_s == 0 for k in sets[s]),
    }
    far = []
    with working_precision(SUM_PREC):
        for k in sets[s + 1]:
            far.append(ge(dists[k - 1][1] * (2 * n), 1))
    checks["far_distance"] = all_verdicts(far) is Verdict.TRUE
    return {"n": n, "s": s, "sizes": [len(p) for p in sets], "checks": checks,
            "verdict": Verdict.TRUE if all(checks.values()) else Verdict.FALSE}


def lemma_dalpha_bound(n: int, alpha: AlphaSpec) -> arb:
    s, rows = locate(alpha, n)
    with working_precision(SUM_PREC):
        return -n * arb(2 * n).log() - _theorem_tail(n, rows, s)


def lemma_dalpha_check(n: int, alpha: AlphaSpec, with_partition: bool = True) -> ProductReport:
    """ln D_alpha(n) >= -n ln(2n) - (n/q_s) ln q_{s+1}."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    lhs = d_alpha(n, alpha)
    rhs = lemma_dalpha_bound(n, alpha)
    verdict = ge(lhs, rhs)
    witness = {}
    if with_partition:
        part = partition_check(n, alpha)
        witness = {"s": part["s"], "sizes": part["sizes"], "checks": part["checks"]}
        verdict = all_verdicts([verdict, part["verdict"]])
    return ProductReport(n=n, ln_lhs=lhs, ln_rhs_bound=rhs, verdict=verdict, witness=witness)


def lemma_split_bound(n: int, alpha: AlphaSpec) -> arb:
    s, rows = locate(alpha, n)
    with working_precision(SUM_PREC):
        ln_n = arb(n).log()
        return -n * arb(2).log() - 2 * n * ln_n - _theorem_tail(n, rows, s)


def lemma_split_check(n: int, m: int, alpha: AlphaSpec) -> ProductReport:
    """ln D(m) + ln D(n - m) >= -n ln 2 - 2n ln n - (n/q_s) ln q_{s+1}, D(0) := 1."""
    if n < 1 or not 0 <= m <= n:
        raise InvalidSpec("need n >= 1 and 0 <= m <= n")
    pre = ln_d_prefix(alpha, n)
    with working_precision(SUM_PREC):
        lhs = pre[m] + pre[n - m]
    rhs = lemma_split_bound(n, alpha)
    return ProductReport(n=n, m=m, ln_lhs=lhs, ln_rhs_bound=rhs, verdict=ge(lhs, rhs))


def lemma_split_sweep(alpha: AlphaSpec, n_max: int) -> list[ProductReport]:
    ln_d_prefix(alpha, n_max)
    return [lemma_split_check(n, m, alpha) for n in range(1, n_max + 1) for m in range(n + 1)]


# --------------------------------------------------------------------------
# auxiliary inequalities
# --------------------------------------------------------------------------


def aux_inequalities_check(n_max: int) -> dict:
    """Stirling sandwich, the half-integer factorial identity and its bound, sum k ln k."""
    if n_max < 1:
        raise InvalidSpec("n_max must be >= 1")
    stirling, identity, half_bound, klogk = [], [], [], []
    first_fail: dict[str, int] = {}

    def note(name, m, v):
        if v is not Verdict.TRUE and name not in first_fail:
            first_fail[name] = m

    with working_precision(SUM_PREC):
        ln_fact = arb(0)
        ln_half = arb(0)
        sum_klogk = arb(0)
        lo_st, hi_st = arb(7) / 8, arb(1)
        odd, fact_m, fact_2m, pow2 = fmpz(1), fmpz(1), fmpz(1), fmpz(1)
        for m in range(1, n_max + 1):
            ln_m = arb(m).log()
            ln_fact = ln_fact + ln_m
            # ln(m!/((m/e)^m sqrt m)) in [7/8, 1]
            val = ln_fact - m * ln_m + m - ln_m / 2
            v = all_verdicts([le(lo_st, val), le(val, hi_st)])
            stirling.append(v)
            note("stirling", m, v)
            # prod (j - 1/2) = (2m)! / (4^m m!) as exact integers:
            # odd/2^m == (2m)!/(4^m m!)  <=>  odd * 2^m * m! == (2m)!
            odd *= 2 * m - 1
            fact_m *= m
            fact_2m *= (2 * m - 1) * (2 * m)
            pow2 *= 2
            v = Verdict.TRUE if odd * pow2 * fact_m == fact_2m else Verdict.FALSE
            identity.append(v)
            note("identity", m, v)
            ln_half = ln_half + (arb(2 * m - 1) / 2).log()
            v = le(m * ln_m - m, ln_half)
            half_bound.append(v)
            note("half_bound", m, v)
            sum_klogk = sum_klogk + m * ln_m
            v = ge(sum_klogk, m * m * ln_m / 2 - arb(m * m) / 4)
            klogk.append(v)
            note("klogk", m, v)
    groups = {"stirling": stirling, "identity": identity,
              "half_bound": half_bound, "klogk": klogk}
    summary = {name: str(all_verdicts(vs)) for name, vs in groups.items()}
    return {"n_max": n_max, "verdicts": summary, "first_failure": first_fail,
            "verdict": all_verdicts(all_verdicts(vs) for vs in groups.values())}


def strictly_decreasing(alpha: AlphaSpec, n_max: int) -> Verdict:
    pre = ln_d_prefix(alpha, n_max)
    from .balls import lt

    return all_verdicts(lt(b, a) for a, b in zip(pre[1:], pre[2:]))


__all__ = [
    "LogOnly",
    "ProductReport",
    "aux_inequalities_check",
    "d_alpha",
    "d_alpha_direct",
    "lemma_dalpha_check",
    "lemma_factorial_check",
    "lemma_factorial_grid",
    "lemma_split_check",
    "lemma_split_sweep",
    "strictly_decreasing",
    "ln_d_prefix",
    "partition_check",
]
