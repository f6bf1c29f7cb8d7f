"""Certified lower bounds for E_n(alpha) = sup{ ||P||_bidisk : ||P||_K <= 1 }.

Any nonzero P of degree n witnesses ln E_n >= ln ||P||_bidisk - ln ||P||_K, so a
certificate is a witness plus two norm enclosures. Witness coefficients are
serialized and parsed back before any norm is computed, which lets `verify`
redo exactly the same computation from the JSON text alone.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from math import comb

from flint import acb, arb, arb_mat

from ..balls import (
    Verdict, all_verdicts, ball_from_strings, ge, interval_strings, le, precision_ladder,
    working_precision,
)
from ..cf_core import AlphaSpec, alpha_ball, locate, parse_alpha
from ..errors import CapExceeded, InvalidSpec, PrecisionExhausted, RankDeficiencyUnresolved
from .bounds import en_upper
from .norms import NormEnclosure, _pi_point, norm_on_bidisk, norm_on_K
from .poly import BivarPoly, dimension, simplex, vanishing_order

SCHEMA = "expcurve/cert/1"
METHODS = ("explicit", "nullspace", "l2_candidate")
DEFAULT_PRECISION = 512


@dataclass(frozen=True)
class Certificate:
    n: int
    alpha: str
    method: str
    witness: BivarPoly
    norm_K: NormEnclosure
    norm_bidisk: NormEnclosure
    ln_ratio_lower: arb
    precision: int
    hint_points: tuple = ()  # (x1, x2) meaning (e^{i pi x1}, e^{i pi x2})
    extras: dict = field(default_factory=dict)
    rows: tuple = ()  # the serialized coefficients the witness was parsed from

    @property
    def lower_bound(self) -> arb:
        """The proven bound ln E_n >= this value, as an exact point."""
        return arb(self.ln_ratio_lower.lower())


def _digits(precision: int) -> int:
    return int(precision * 0.30103) + 8


def _round_trip(P: BivarPoly, precision: int) -> tuple[BivarPoly, list]:
    with working_precision(precision):
        rows = P.to_strings(_digits(precision))
        return BivarPoly.from_strings(P.n, rows), rows


def _hints(points) -> tuple:
    return tuple((_pi_point(Fraction(x1)), _pi_point(Fraction(x2))) for x1, x2 in points)


def _ratio(norm_bidisk: NormEnclosure, norm_K: NormEnclosure) -> arb:
    """[ln lower_bidisk - ln upper_K, ln upper_bidisk - ln lower_K] as one ball."""
    lo_ = norm_bidisk.ln_lower() - norm_K.ln_upper()
    if norm_K.lower > 0:
        hi_ = norm_bidisk.ln_upper() - norm_K.ln_lower()
    else:
        hi_ = arb("inf")
    return arb(lo_.lower()).union(arb(hi_.upper()))


def _explicit_parts(n: int, alpha: AlphaSpec) -> tuple[int, int, int]:
    s, rows = locate(alpha, n)
    p, q = rows[s].p, rows[s].q
    if not isinstance(p, int) or not isinstance(q, int):
        raise CapExceeded(f"p_{s} or q_{s} is LogOnly")
    M = n // q
    if M * max(p, q) > n:
        raise InvalidSpec("explicit witness needs 0 < alpha < 1")
    return p, q, M


def _power_norm(base: NormEnclosure, M: int) -> NormEnclosure:
    return NormEnclosure(base.domain, base.lower ** M, base.upper ** M, base.grid, base.slack,
                         base.converged, base.precision, base.method + f" ^{M}")


def _explicit_norm_K(p: int, q: int, M: int, alpha: AlphaSpec, precision: int) -> NormEnclosure:
    """||(z^p - w^q)^M||_K = ||z^p - w^q||_K^M."""
    base = BivarPoly.binomial_power(max(p, q), p, q, 1)
    return _power_norm(norm_on_K(base, alpha, precision=precision), M)


def certificate_explicit(n: int, alpha: AlphaSpec, precision: int = DEFAULT_PRECISION) -> Certificate:
    """Witness (z^{p_s} - w^{q_s})^{[n/q_s]}, whose bidisk norm is 2^{[n/q_s]}."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    p, q, M = _explicit_parts(n, alpha)
    P, rows_ = _round_trip(BivarPoly.binomial_power(n, p, q, M), precision)
    hints = ((Fraction(0), Fraction(1, q)),)
    norm_K = _explicit_norm_K(p, q, M, alpha, precision)
    norm_B = norm_on_bidisk(P, precision=precision, hint_points=_hints(hints))
    s, rows = locate(alpha, n)
    from ..cf_core import ln_magnitude

    with working_precision(precision):
        ratio = _ratio(norm_B, norm_K)
        floor = M * ln_magnitude(rows[s + 1].q) - n
    verdict = ge(arb(ratio.lower()), floor)
    if verdict is not Verdict.TRUE:
        raise PrecisionExhausted(f"explicit certificate below the guaranteed floor at n={n}")
    return Certificate(n, str(alpha), "explicit", P, norm_K, norm_B, ratio, precision, hints,
                       {"s": s, "p_s": p, "q_s": q, "M": M, "floor": floor,
                        "floor_verdict": verdict}, tuple(rows_))


@lru_cache(maxsize=None)
def _explicit_cached(n: int, alpha: AlphaSpec, precision: int) -> arb:
    return certificate_explicit(n, alpha, precision).ln_ratio_lower


def explicit_ln_ratio(n: int, alpha: AlphaSpec, precision: int = DEFAULT_PRECISION) -> arb:
    return _explicit_cached(n, alpha, precision)


# null space ---------------------------------------------------------------------


def nullspace_closed_form(n: int, alpha: AlphaSpec, precision: int = DEFAULT_PRECISION) -> list[arb]:
    """c_i = 1 / prod_{i' != i} (lambda_i - lambda_i'): the divided-difference null vector."""
    with working_precision(precision):
        a = alpha_ball(alpha, precision)
        lam = [j + k * a for j, k in simplex(n)]
        out = []
        for i, li in enumerate(lam):
            d = arb(1)
            for i2, lj in enumerate(lam):
                if i2 != i:
                    d *= li - lj
            out.append(1 / d)
    return out


def _system(n: int, a: arb) -> arb_mat:
    """Rows t = 0..N-1 of lambda_i^t / t!."""
    lam = [j + k * a for j, k in simplex(n)]
    N = vanishing_order(n)
    rows = []
    row = [arb(1)] * len(lam)
    for t in range(N):
        if t > 0:
            row = [x * l / t for x, l in zip(row, lam)]
        rows.append(list(row))
    return arb_mat(rows)


def _certified_null_vector(n: int, alpha: AlphaSpec, bits: int) -> list[arb] | None:
    with working_precision(bits):
        a = alpha_ball(alpha, bits)
        V = _system(n, a)
        size = V.ncols()
        # approximate direction first, to pick the pivot coordinate
        first = arb_mat([[V[r, c] for c in range(1, size)] for r in range(V.nrows())])
        rhs = arb_mat([[-V[r, 0]] for r in range(V.nrows())])
        approx = [arb(1)] + [x.mid() for x in first.solve(rhs, algorithm="approx").entries()]
        pivot = max(range(size), key=lambda i: abs(float(approx[i].mid())))
        scale = arb(approx[pivot].mid())
        others = [c for c in range(size) if c != pivot]
        A = arb_mat([[V[r, c] for c in others] for r in range(V.nrows())])
        b = arb_mat([[-V[r, pivot]] for r in range(V.nrows())])
        try:
            x = A.solve(b).entries()
        except ZeroDivisionError:
            return None
        if not all(v.is_finite() for v in x):
            return None
        vec = [arb(0)] * size
        vec[pivot] = arb(1)
        for c, v in zip(others, x):
            vec[c] = v
        # exact rescaling keeps the balls enclosing a null vector
        sign = 1 if scale > 0 else -1
        return [v * sign for v in vec]


def _vanishing(P: BivarPoly, alpha: AlphaSpec, precision: int) -> Verdict:
    N = vanishing_order(P.n)
    with working_precision(precision):
        a = alpha_ball(alpha, precision)
        derivs = P.derivatives_at_zero(a, N)
    ok = all(d.contains(0) for d in derivs[:N])
    nontrivial = P.is_nonzero()
    return Verdict.TRUE if ok and nontrivial else Verdict.FALSE


def certificate_nullspace(n: int, alpha: AlphaSpec, precision: int = DEFAULT_PRECISION) -> Certificate:
    """Witness vanishing to order N = (n^2 + 3n)/2 at z = 0."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    vec = None
    for bits in precision_ladder(precision):
        vec = _certified_null_vector(n, alpha, bits)
        if vec is not None:
            precision = bits
            break
    if vec is None:
        raise RankDeficiencyUnresolved(f"null vector for n={n} not certified below the cap")
    P, rows_ = _round_trip(BivarPoly.from_vector(n, vec), precision)
    vanish = _vanishing(P, alpha, precision)
    norm_K = norm_on_K(P, alpha, precision=precision)
    norm_B = norm_on_bidisk(P, precision=precision)
    N = vanishing_order(n)
    with working_precision(precision):
        ratio = _ratio(norm_B, norm_K)
        proof_value = N * arb(n).log() - n * n
        upper = en_upper(n, alpha)
    return Certificate(n, str(alpha), "nullspace", P, norm_K, norm_B, ratio, precision, (),
                       {"N": N, "vanishing": vanish,
                        "proof_lower": proof_value,
                        "meets_proof_lower": ge(arb(ratio.lower()), proof_value),  # reported only
                        "consistent": le(arb(ratio.lower()), upper)}, tuple(rows_))


# L2 heuristic --------------------------------------------------------------------


def gram_kernel(lam, mu, bits: int = 256) -> arb:
    """<e^{lam z}, e^{mu z}> = sum_m (lam mu)^m / (m!)^2 with a certified tail."""
    with working_precision(bits):
        x = arb(lam) * arb(mu)
        X = abs(x).upper()
        return _kernel(x, arb(X), bits)


def _kernel_terms(X: arb, bits: int) -> int:
    """Smallest M with X^{M+1}/((M+1)!)^2 < 2^-bits and X < (M+2)^2."""
    M = 0
    term = arb(1)
    eps = arb(2) ** (-bits)
    while True:
        term = term * X / ((M + 1) * (M + 1))
        if term < eps and X < (M + 2) ** 2:
            return M
        M += 1


def _kernel(x: arb, X: arb, bits: int, M: int | None = None) -> arb:
    if M is None:
        M = _kernel_terms(X, bits)
    total = arb(0)
    term = arb(1)
    for m in range(M + 1):
        if m:
            term = term * x / (m * m)
        total += term
    nxt = X ** (M + 1) / arb(M + 2).gamma() ** 2
    tail = nxt / (1 - X / ((M + 2) * (M + 2)))
    return total + arb(0, tail.upper())


def gram_matrix(n: int, alpha: AlphaSpec, bits: int) -> arb_mat:
    with working_precision(bits):
        a = alpha_ball(alpha, bits)
        lam = [j + k * a for j, k in simplex(n)]
        X = arb((n * (1 + a)).upper()) ** 2
        M = _kernel_terms(X, bits)
        size = len(lam)
        G = arb_mat(size, size)
        for i in range(size):
            for j in range(i, size):
                v = _kernel(lam[i] * lam[j], X, bits, M)
                G[i, j] = v
                G[j, i] = v
    return G


def l2_candidate(n: int, alpha: AlphaSpec, precision: int = DEFAULT_PRECISION,
                 iterations: int = 12, seed: int = 0) -> Certificate:
    """Smallest-eigenvalue direction of the Gram matrix, then certified like any witness."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    rng = random.Random(seed)
    with working_precision(precision):
        G = gram_matrix(n, alpha, precision)
        Gm = arb_mat([[G[i, j].mid() for j in range(G.ncols())] for i in range(G.nrows())])
        x = arb_mat([[arb(rng.uniform(-1, 1))] for _ in range(G.nrows())])
        for _ in range(iterations):
            try:
                x = Gm.solve(x, algorithm="approx")
            except ZeroDivisionError as exc:
                raise PrecisionExhausted("Gram matrix singular at this precision") from exc
            big = max(abs(float(v.mid())) for v in x.entries())
            if not big or big != big:
                raise PrecisionExhausted("inverse iteration lost all precision")
            x = x * arb(1 / big)
        vec = [arb(v.mid()) for v in x.entries()]
    P, rows_ = _round_trip(BivarPoly.from_vector(n, vec), precision)
    norm_K = norm_on_K(P, alpha, precision=precision)
    norm_B = norm_on_bidisk(P, precision=precision)
    with working_precision(precision):
        ratio = _ratio(norm_B, norm_K)
        upper = en_upper(n, alpha)
    return Certificate(n, str(alpha), "l2_candidate", P, norm_K, norm_B, ratio, precision, (),
                       {"consistent": le(arb(ratio.lower()), upper), "iterations": iterations,
                        "seed": seed}, tuple(rows_))


# JSON ---------------------------------------------------------------------------


def _ln_interval(e: NormEnclosure) -> list[str]:
    with working_precision(e.precision):
        lo_ = e.ln_lower()
        hi_ = e.ln_upper()
    return interval_strings(arb(lo_.lower()).union(arb(hi_.upper())), 30)


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "schema": SCHEMA,
        "n": cert.n,
        "alpha": cert.alpha,
        "method": cert.method,
        "coefficients": [list(r) for r in cert.rows]
        or cert.witness.to_strings(_digits(cert.precision)),
        "hint_points": [[str(x1), str(x2)] for x1, x2 in cert.hint_points],
        "ln_norm_K": _ln_interval(cert.norm_K),
        "ln_norm_bidisk": _ln_interval(cert.norm_bidisk),
        "ln_ratio_lower": interval_strings(cert.ln_ratio_lower, 30),
        "precision_bits": cert.precision,
    }


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class VerifyResult:
    verdict: Verdict
    checks: dict
    recomputed_ln_ratio: arb | None


def _check_explicit_structure(P: BivarPoly, n: int, alpha: AlphaSpec) -> tuple[Verdict, tuple]:
    p, q, M = _explicit_parts(n, alpha)
    expected = BivarPoly.binomial_power(n, p, q, M)
    same = all(c.is_exact() and c == e for c, e in zip(P.coeffs, expected.coeffs))
    return (Verdict.TRUE if same else Verdict.FALSE), (p, q, M)


def verify_certificate(doc: dict | str) -> VerifyResult:
    """Recompute a serialized certificate from its coefficients alone."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    checks: dict = {}
    if doc.get("schema") != SCHEMA:
        raise InvalidSpec(f"unknown certificate schema {doc.get('schema')!r}")
    method = doc.get("method")
    if method not in METHODS:
        raise InvalidSpec(f"unknown certificate method {method!r}")
    n = int(doc["n"])
    alpha = parse_alpha(doc["alpha"])
    precision = int(doc["precision_bits"])
    with working_precision(precision):
        P = BivarPoly.from_strings(n, doc["coefficients"])
    if [(j, k) for j, k, *_ in doc["coefficients"]] != simplex(n):
        raise InvalidSpec("coefficients must list the simplex in lexicographic order")
    hints = tuple((Fraction(x1), Fraction(x2)) for x1, x2 in doc.get("hint_points", []))
    checks["nonzero"] = Verdict.TRUE if P.is_nonzero() else Verdict.FALSE
    if checks["nonzero"] is not Verdict.TRUE:
        return VerifyResult(Verdict.FALSE, checks, None)
    if method == "explicit":
        checks["structure"], (p, q, M) = _check_explicit_structure(P, n, alpha)
        norm_K = _explicit_norm_K(p, q, M, alpha, precision)
    else:
        if method == "nullspace":
            checks["vanishing"] = _vanishing(P, alpha, precision)
        norm_K = norm_on_K(P, alpha, precision=precision)
    norm_B = norm_on_bidisk(P, precision=precision, hint_points=_hints(hints))
    with working_precision(precision):
        ratio = _ratio(norm_B, norm_K)
        claimed = Decimal(doc["ln_ratio_lower"][0])
        got = Decimal(interval_strings(ratio, 30)[0])
        checks["reproduced"] = Verdict.TRUE if claimed <= got else Verdict.FALSE
        checks["consistent"] = le(arb(ratio.lower()), en_upper(n, alpha))
        if method == "explicit":
            from ..cf_core import ln_magnitude

            s, rows = locate(alpha, n)
            checks["floor"] = ge(arb(ratio.lower()), M * ln_magnitude(rows[s + 1].q) - n)
    return VerifyResult(all_verdicts(checks.values()), checks, ratio)
