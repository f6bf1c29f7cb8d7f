"""The two-sided bounds on e_n(alpha), the growth inequality off K and the corollaries."""

from __future__ import annotations

from dataclasses import dataclass, field

from flint import arb, fmpz

from ..balls import Verdict, all_verdicts, ge, le, lt, overlap, working_precision
from ..cf_core import AlphaSpec, alpha_ball, dists_to_Z, ln_magnitude, locate
from ..errors import CapExceeded, InvalidSpec
from .poly import BivarPoly

BOUND_PREC = 192


def _ln(x: int) -> arb:
    return arb(x).log()


def theorem_tail(n: int, alpha: AlphaSpec) -> arb:
    """(n / q_s) ln q_{s+1} with q_s <= n < q_{s+1}."""
    s, rows = locate(alpha, n)
    q_s = rows[s].q
    if not isinstance(q_s, int):
        raise CapExceeded(f"q_{s} is LogOnly")
    with working_precision(BOUND_PREC):
        return arb(n) / arb(fmpz(q_s)) * ln_magnitude(rows[s + 1].q)


def en_lower(n: int, alpha: AlphaSpec) -> arb:
    """max{n^2 ln n / 2 - n^2, [n/q_s] ln q_{s+1} - n}."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    s, rows = locate(alpha, n)
    q_s = rows[s].q
    with working_precision(BOUND_PREC):
        first = n * n * _ln(n) / 2 - n * n
        second = (n // q_s) * ln_magnitude(rows[s + 1].q) - n
        return first.max(second)


def en_upper(n: int, alpha: AlphaSpec) -> arb:
    """n^2 ln n / 2 + 9 n^2 + (n/q_s) ln q_{s+1}."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    with working_precision(BOUND_PREC):
        return n * n * _ln(n) / 2 + 9 * n * n + theorem_tail(n, alpha)


@dataclass(frozen=True)
class BoundsRow:
    n: int
    s: int
    en_lower: arb
    en_upper: arb
    best_certificate: arb  # proven lower bound; 0 from the constant witness
    certificate_method: str
    sandwich: Verdict


@dataclass(frozen=True)
class BoundsReport:
    alpha: str
    rows: tuple[BoundsRow, ...]

    @property
    def verdict(self) -> Verdict:
        return all_verdicts(r.sandwich for r in self.rows)


def bounds_table(alpha: AlphaSpec, ns, certificates: bool = False,
                 precision: int = 256) -> BoundsReport:
    from .certificates import explicit_ln_ratio

    rows = []
    for n in ns:
        s, _ = locate(alpha, n)
        lo_, hi_ = en_lower(n, alpha), en_upper(n, alpha)
        best, method = arb(0), "constant"
        checks = [le(lo_, hi_)]
        if certificates:
            value = explicit_ln_ratio(n, alpha, precision)
            if value.lower() > best.lower():
                best, method = arb(value.lower()), "explicit"
        checks.append(le(best, hi_))
        rows.append(BoundsRow(n, s, lo_, hi_, best, method, all_verdicts(checks)))
    return BoundsReport(str(alpha), tuple(rows))


def bernstein_walsh_bound(P: BivarPoly, z, w, alpha: AlphaSpec, en_bound: arb,
                          norm_K=None) -> dict:
    """|P(z, w)| <= ||P||_K e^{en_bound} exp(n ln+ max(|z|, |w|))."""
    from flint import acb

    from .norms import norm_on_K

    if norm_K is None:
        norm_K = norm_on_K(P, alpha)
    with working_precision(BOUND_PREC):
        z, w = acb(z), acb(w)
        lhs = abs(P.evaluate(z, w))
        radius = abs(z).max(abs(w))
        if radius.is_zero():
            growth = arb(0)
        else:
            growth = radius.log().max(arb(0))
        ln_rhs = norm_K.ln_lower() + arb(en_bound.lower()) + P.n * arb(growth.upper())
        if lhs.is_zero() or not lhs > 0 and lhs.contains(0) and lhs.upper() <= 0:
            verdict = Verdict.TRUE
        else:
            ln_lhs = arb(lhs.upper()).log()
            verdict = le(ln_lhs, arb(ln_rhs.lower()))
    return {"abs_P": lhs, "ln_rhs": ln_rhs, "verdict": verdict}


def min_distance(alpha: AlphaSpec, n: int) -> tuple[int, arb]:
    """(argmin k, min_{k<=n} dist(k alpha, Z)), with the argmin certified."""
    dists = dists_to_Z(alpha, n)
    best_k = min(range(1, n + 1), key=lambda k: float(dists[k - 1][1].mid()))
    best = dists[best_k - 1][1]
    for k in range(1, n + 1):
        if k != best_k and not best < dists[k - 1][1]:
            raise CapExceeded(f"minimum of dist(k alpha, Z) over k <= {n} not separated")
    return best_k, best


def corollary_dio_check(n: int, alpha: AlphaSpec, certificate_ln: arb | None = None) -> dict:
    """min_{k<=n} dist(k alpha, Z) >= (2 e^n E_n)^{-1}, with E_n <= exp(en_upper)."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    k_min, lhs = min_distance(alpha, n)
    s, rows = locate(alpha, n)
    with working_precision(BOUND_PREC):
        a = alpha_ball(alpha, BOUND_PREC + 64)
        cross = abs(rows[s].q * a - rows[s].p)
        ln_lhs = lhs.log()
        upper = en_upper(n, alpha)
        ln_rhs = -arb(2).log() - n - upper
        sharp = None if certificate_ln is None else -arb(2).log() - n - certificate_ln
    return {
        "n": n, "s": s, "argmin": k_min, "ln_lhs": ln_lhs, "ln_rhs": ln_rhs,
        "argmin_is_q_s": k_min == rows[s].q,
        "matches_convergent": overlap(lhs, cross),
        "ln_rhs_from_certificate": sharp,  # reported only
        "verdict": all_verdicts([ge(ln_lhs, ln_rhs), overlap(lhs, cross),
                                 Verdict.TRUE if k_min == rows[s].q else Verdict.FALSE]),
    }


def _deep_rows(alpha: AlphaSpec, depth: int):
    from ..alpha_gen import _deepest_table

    return _deepest_table(alpha, depth, 10**6)


def dio_constant(alpha: AlphaSpec, mu: float, S: int) -> dict:
    """ln C_dio = max_{0<=s<=S} (ln q_{s+1} - (mu - 1) ln q_s) over the horizon."""
    rows = _deep_rows(alpha, S + 1)
    last = min(S, len(rows) - 2)
    with working_precision(BOUND_PREC):
        values = []
        for s in range(0, last + 1):
            values.append(ln_magnitude(rows[s + 1].q) - (arb(mu) - 1) * ln_magnitude(rows[s].q))
        best = values[0]
        for v in values[1:]:
            best = best.max(v)
    growing = len(values) >= 3 and all(lt(x, y) is Verdict.TRUE for x, y in zip(values[-3:], values[-2:]))
    flag = bool(growing and values[-1] > 10)
    return {"ln_C_s": values, "ln_C_dio": best, "horizon": last, "tail": values[-1],
            "non_diophantine_signature": flag}


def corollary_endio_check(alpha: AlphaSpec, mu: float, S: int, n_max: int = 100) -> dict:
    """e_n <= n^2 ln n / 2 + 9 n^2 + C n with C = ln C_dio + (mu - 1)/2."""
    if mu < 2:
        raise InvalidSpec("mu must be >= 2")
    info = dio_constant(alpha, mu, S)
    with working_precision(BOUND_PREC):
        C = info["ln_C_dio"] + (arb(mu) - 1) / 2
        verdicts = []
        for n in range(1, n_max + 1):
            rhs = n * n * _ln(n) / 2 + 9 * n * n + C * n
            verdicts.append(le(en_upper(n, alpha), rhs))
    return {**info, "C": C, "n_max": n_max, "verdicts": verdicts,
            "verdict": all_verdicts(verdicts)}
