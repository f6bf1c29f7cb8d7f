"""Machinery of the upper bound: the products beta_lm, the interpolating
operators R_lm(d/dz) and the coefficient estimate they give.

For P(z, w) = sum c_jk z^j w^k put f(z) = P(e^z, e^{alpha z}) and

    R_lm(lambda) = prod_{(j,k) != (l,m)} (lambda - j - k alpha) = sum_t a_t lambda^t.

Then R_lm(d/dz) f at 0 equals c_lm beta_lm, because R_lm vanishes at every
node j + k alpha except l + m alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from flint import acb, arb, arb_poly

from ..balls import Verdict, all_verdicts, ge, le, overlap, working_precision
from ..cf_core import AlphaSpec, alpha_ball, locate
from ..errors import InvalidSpec
from .norms import NormEnclosure, norm_on_K
from .poly import BivarPoly, simplex, vanishing_order

BETA_PREC = 256


def working_bits(n: int, alpha: AlphaSpec) -> int:
    """Enough bits to separate every k alpha, k <= n, from the integers:
    such a distance is at least about 1 / (2 q_{s+1})."""
    from ..cf_core import ln_magnitude

    s, rows = locate(alpha, n)
    ln_q = ln_magnitude(rows[s + 1].q)
    return BETA_PREC + 2 * n.bit_length() + int(float(ln_q.upper()) / 0.693) + 1


def chain_bound(n: int, alpha: AlphaSpec) -> arb:
    """n^2 ln n / 2 - 4.2 n^2 - (n/q_s) ln q_{s+1}."""
    from .bounds import theorem_tail

    with working_precision(BETA_PREC):
        ln_n = arb(n).log()
        return n * n * ln_n / 2 - arb("4.2") * n * n - theorem_tail(n, alpha)


@dataclass(frozen=True)
class BetaReport:
    n: int
    l: int
    m: int
    value: arb
    ln_abs: arb
    sign: int | None
    chain_bound: arb
    chain_verdict: Verdict
    regrouping: dict = field(default_factory=dict)


class _Alpha:
    """alpha at a cheap working precision, refined on demand for the few
    combinations u + v alpha that sit too close to zero."""

    def __init__(self, n: int, alpha: AlphaSpec):
        self.low = alpha_ball(alpha, BETA_PREC)
        self._alpha = alpha
        self._n = n
        self._high = None

    def high(self) -> tuple[arb, int]:
        if self._high is None:
            bits = working_bits(self._n, self._alpha)
            self._high = (alpha_ball(self._alpha, bits), bits)
        return self._high

    def combo(self, u: int, v: int) -> arb:
        """u + v alpha, as a ball not containing 0 unless u = v = 0."""
        value = u + v * self.low
        if value.contains(0) and (u, v) != (0, 0):
            a, bits = self.high()
            with working_precision(bits):
                value = u + v * a
        return value

    def log_abs(self, u: int, v: int) -> arb:
        # a refined ball has small relative radius, so its log is accurate here
        return abs(self.combo(u, v)).log()


def beta_product(n: int, l: int, m: int, alpha: AlphaSpec,
                 with_regrouping: bool = False) -> BetaReport:
    """beta_lm = prod_{(j,k) != (l,m)} (l - j + (m - k) alpha) in lexicographic order."""
    if l < 0 or m < 0 or l + m > n:
        raise InvalidSpec("need l, m >= 0 and l + m <= n")
    A = _Alpha(n, alpha)
    with working_precision(BETA_PREC):
        value = arb(1)
        ln_abs = arb(0)
        negatives = 0
        sign_known = True
        for j, k in simplex(n):
            if (j, k) == (l, m):
                continue
            f = A.combo(l - j, m - k)
            value *= f
            ln_abs += A.log_abs(l - j, m - k)
            if f < 0:
                negatives += 1
            elif not f > 0:
                sign_known = False
        bound = chain_bound(n, alpha)
        report = BetaReport(
            n, l, m, value, ln_abs,
            (-1) ** negatives if sign_known else None,
            bound, ge(ln_abs, bound),
            beta_regrouped(n, l, m, alpha, ln_abs) if with_regrouping else {},
        )
    return report


def _row_log(x: int, y: int, k: int, A: _Alpha) -> arb:
    """sum_{j=x}^y ln |j - k alpha|."""
    total = arb(0)
    for j in range(x, y + 1):
        total += A.log_abs(j, -k)
    return total


def _row_excess(x: int, y: int, k: int, A: _Alpha) -> arb:
    """sum_{j=x}^y ln |j - k alpha| - ln dist(k alpha, Z).

    The factor at the nearest integer cancels exactly, so a one-factor row
    gives an exact zero instead of a ball around it.
    """
    nearest = int((k * A.low + arb(1) / 2).floor().unique_fmpz())
    total = arb(0)
    for j in range(x, y + 1):
        if j != nearest:
            total += A.log_abs(j, -k)
    if not x <= nearest <= y:
        total -= A.log_abs(nearest, -k)
    return total


def _xlx(t: int) -> arb:
    """t (ln t - ln 2 - 1), zero at t = 0."""
    if t == 0:
        return arb(0)
    return t * (arb(t).log() - arb(2).log() - 1)


def beta_regrouped(n: int, l: int, m: int, alpha: AlphaSpec, ln_beta: arb | None = None) -> dict:
    """|beta_lm| = A1 A2 l! (n-m-l)!, with A1, A2 in their reindexed forms, plus the
    factorial-lemma lower bounds A1 >= D(m) prod_k ((n-m+k)/2e)^{n-m+k} and
    A2 >= D(n-m) prod_k ((n-m-k)/2e)^{n-m-k}."""
    A = _Alpha(n, alpha)
    with working_precision(BETA_PREC):
        ln_A1 = arb(0)
        excess_A1 = arb(0)
        bound_A1 = arb(0)
        for k in range(1, m + 1):
            x, y = -l, n - m - l + k
            ln_A1 += _row_log(x, y, k, A)
            excess_A1 += _row_excess(x, y, k, A)
            bound_A1 += _xlx(y - x)
        ln_A2 = arb(0)
        excess_A2 = arb(0)
        bound_A2 = arb(0)
        for k in range(1, n - m + 1):
            x, y = l + m - n + k, l
            ln_A2 += _row_log(x, y, k, A)
            excess_A2 += _row_excess(x, y, k, A)
            bound_A2 += _xlx(y - x)
        ln_rest = arb(l + 1).lgamma() + arb(n - m - l + 1).lgamma()
        total = ln_A1 + ln_A2 + ln_rest
        if ln_beta is None:
            ln_beta = beta_product(n, l, m, alpha).ln_abs
    return {
        "ln_A1": ln_A1,
        "ln_A2": ln_A2,
        "ln_factorials": ln_rest,
        "regrouping_overlap": overlap(total, ln_beta),
        "A1_bound": ge(excess_A1, bound_A1),
        "A2_bound": ge(excess_A2, bound_A2),
    }


def node_vanishing(n: int, l: int, m: int, alpha: AlphaSpec) -> dict:
    """R_lm at every node: zero off (l, m), beta_lm at (l, m).

    The exact check works in Z[alpha]: a factor (j - j') + (k - k') alpha is
    zero iff both integers are zero, since alpha is irrational.
    """
    nodes = simplex(n)
    if (l, m) not in nodes:
        raise InvalidSpec("(l, m) outside the simplex")
    exact_ok = True
    ball_ok = True
    beta_ok = True
    bits = working_bits(n, alpha)
    with working_precision(bits):
        a = alpha_ball(alpha, bits)
        lam = {idx: idx[0] + idx[1] * a for idx in nodes}
        beta = beta_product(n, l, m, alpha).value
        for node in nodes:
            zero_pairs = sum(1 for other in nodes if other != (l, m) and other == node)
            expected = 0 if node == (l, m) else 1
            exact_ok &= zero_pairs == expected
            value = arb(1)
            for other in nodes:
                if other != (l, m):
                    value *= lam[node] - lam[other]
            if node == (l, m):
                beta_ok &= overlap(value, beta) is Verdict.TRUE and not value.contains(0)
            else:
                ball_ok &= value.contains(0)
    verdict = Verdict.TRUE if (exact_ok and ball_ok and beta_ok) else Verdict.FALSE
    return {"exact": exact_ok, "balls": ball_ok, "beta": beta_ok, "verdict": verdict}


def r_coefficients(n: int, l: int, m: int, a: arb) -> list[arb]:
    """a_0..a_N of R_lm."""
    roots = [j + k * a for j, k in simplex(n) if (j, k) != (l, m)]
    return arb_poly.from_roots(roots).coeffs()


def interpolation_identity_check(P: BivarPoly, l: int, m: int, alpha: AlphaSpec) -> dict:
    """sum c_jk R_lm(j + k alpha) = c_lm beta_lm, by direct evaluation and via D_R at 0."""
    n = P.n
    if l < 0 or m < 0 or l + m > n:
        raise InvalidSpec("need l + m <= deg P")
    bits = working_bits(n, alpha)
    with working_precision(bits):
        a = alpha_ball(alpha, bits)
        nodes = simplex(n)
        lam = {idx: idx[0] + idx[1] * a for idx in nodes}
        direct = acb(0)
        for idx, c in P.items():
            value = arb(1)
            for other in nodes:
                if other != (l, m):
                    value *= lam[idx] - lam[other]
            direct += c * value
        coeffs = r_coefficients(n, l, m, a)
        derivs = P.derivatives_at_zero(a, len(coeffs) - 1)
        via_operator = acb(0)
        for a_t, d in zip(coeffs, derivs):
            via_operator += a_t * d
        target = P.coeff(l, m) * beta_product(n, l, m, alpha).value
        v1 = Verdict.TRUE if direct.overlaps(target) else Verdict.FALSE
        v2 = Verdict.TRUE if via_operator.overlaps(target) else Verdict.FALSE
    return {"direct": direct, "operator": via_operator, "target": target,
            "verdict": all_verdicts([v1, v2])}


def coeff_bound_check(P: BivarPoly, alpha: AlphaSpec, norm: NormEnclosure | None = None) -> dict:
    """After dividing P by an upper bound for ||f||, check ln|c_lm beta_lm| <= N ln(N + n)
    and the estimates used to reach it."""
    if not P.is_nonzero():
        raise InvalidSpec("coefficient bound needs a nonzero polynomial")
    n = P.n
    N = vanishing_order(n)
    if norm is None:
        norm = norm_on_K(P, alpha, precision=BETA_PREC)
    verdicts = []
    worst = None
    bits = working_bits(n, alpha)
    with working_precision(bits):
        a = alpha_ball(alpha, bits)
        U = norm.upper
        Q = P.scale(acb(1) / U)
        cap = N * arb(N + n).log()
        chain = le(cap, n * n * arb(n).log() + arb("3.7") * n * n)
        derivs = Q.derivatives_at_zero(a, N)
        # Cauchy: |f^(t)(0)| <= t! once ||f|| <= 1
        cauchy = all_verdicts(le(abs(d), arb(t + 1).gamma()) for t, d in enumerate(derivs))
        for l, m in simplex(n):
            c = Q.coeff(l, m)
            coeffs = r_coefficients(n, l, m, a)
            sym = arb(0)
            for t, a_t in enumerate(coeffs):
                sym += abs(a_t) * arb(N) ** t
            verdicts.append(le(sym.log(), N * arb(N + n).log()))
            if c.is_zero():
                continue
            beta = beta_product(n, l, m, alpha).value
            size = arb((c.abs_upper() * abs(beta)).upper())
            if size.is_zero():
                continue
            ln_size = size.log()
            verdicts.append(le(ln_size, cap))
            worst = ln_size if worst is None else worst.max(ln_size)
    return {"n": n, "N": N, "norm_upper": norm.upper, "worst_ln": worst, "cap": cap,
            "chain": chain, "cauchy": cauchy,
            "verdict": all_verdicts(verdicts + [chain, cauchy])}
