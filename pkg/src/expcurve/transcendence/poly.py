"""Bivariate polynomials P(z, w) = sum_{j+k<=n} c_jk z^j w^k with ball coefficients."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from flint import acb, acb_poly, arb

from ..balls import ball_str, cball_parse, to_arb
from ..errors import InvalidSpec

Index = tuple[int, int]


def simplex(n: int) -> list[Index]:
    """Lattice points j + k <= n in the fixed lexicographic order."""
    return [(j, k) for j in range(n + 1) for k in range(n - j + 1)]


def dimension(n: int) -> int:
    """N + 1 with N = (n^2 + 3n) / 2."""
    return (n + 1) * (n + 2) // 2


def vanishing_order(n: int) -> int:
    return (n * n + 3 * n) // 2


def _to_acb(v) -> acb:
    if isinstance(v, acb):
        return v
    if isinstance(v, complex):
        return acb(v.real, v.imag)
    if isinstance(v, tuple):
        return acb(to_arb(v[0]), to_arb(v[1]))
    return acb(to_arb(v))


@dataclass(frozen=True)
class BivarPoly:
    n: int
    coeffs: tuple  # acb per simplex(n) entry

    def __post_init__(self):
        if self.n < 0:
            raise InvalidSpec("degree must be >= 0")
        if len(self.coeffs) != dimension(self.n):
            raise InvalidSpec(f"degree {self.n} needs {dimension(self.n)} coefficients")

    # construction ---------------------------------------------------------

    @classmethod
    def from_dict(cls, n: int, values: Mapping[Index, object]) -> "BivarPoly":
        for (j, k) in values:
            if j < 0 or k < 0 or j + k > n:
                raise InvalidSpec(f"monomial z^{j} w^{k} exceeds degree {n}")
        return cls(n, tuple(_to_acb(values.get(idx, 0)) for idx in simplex(n)))

    @classmethod
    def from_vector(cls, n: int, values: Sequence) -> "BivarPoly":
        return cls(n, tuple(_to_acb(v) for v in values))

    @classmethod
    def monomial(cls, n: int, j: int, k: int, c=1) -> "BivarPoly":
        return cls.from_dict(n, {(j, k): c})

    @classmethod
    def binomial_power(cls, n: int, p: int, q: int, M: int) -> "BivarPoly":
        """(z^p - w^q)^M expanded exactly."""
        if M * max(p, q) > n:
            raise InvalidSpec("binomial power exceeds the degree")
        vals = {}
        for i in range(M + 1):
            key = (p * (M - i), q * i)
            vals[key] = vals.get(key, 0) + (-1) ** i * comb(M, i)
        return cls.from_dict(n, vals)

    @classmethod
    def random(cls, n: int, seed: int, height: int = 9) -> "BivarPoly":
        """Gaussian-integer coefficients over small rationals; never the zero polynomial."""
        rng = random.Random(seed)
        vals = {}
        for idx in simplex(n):
            re = Fraction(rng.randint(-height, height), rng.randint(1, height))
            im = Fraction(rng.randint(-height, height), rng.randint(1, height))
            vals[idx] = (re, im)
        if all(v == (0, 0) for v in vals.values()):
            vals[(0, 0)] = (Fraction(1), Fraction(0))
        return cls.from_dict(n, vals)

    # access -----------------------------------------------------------------

    @property
    def index(self) -> list[Index]:
        return simplex(self.n)

    def coeff(self, j: int, k: int) -> acb:
        if j < 0 or k < 0 or j + k > self.n:
            return acb(0)
        return self.coeffs[self.index.index((j, k))]

    def items(self) -> Iterable[tuple[Index, acb]]:
        return zip(self.index, self.coeffs)

    def support(self) -> list[Index]:
        """Monomials whose coefficient ball is not exactly zero."""
        return [idx for idx, c in self.items() if not c.is_zero()]

    def is_nonzero(self) -> bool:
        return any(not c.contains(0) for c in self.coeffs)

    def degree_ranges(self) -> tuple[tuple[int, int], tuple[int, int]]:
        sup = self.support() or [(0, 0)]
        js = [j for j, _ in sup]
        ks = [k for _, k in sup]
        return (min(js), max(js)), (min(ks), max(ks))

    def sum_abs(self) -> arb:
        total = arb(0)
        for c in self.coeffs:
            total += c.abs_upper()
        return total

    def max_abs_lower(self) -> arb:
        best = arb(0)
        for c in self.coeffs:
            best = best.max(c.abs_lower())
        return best

    def scale(self, factor) -> "BivarPoly":
        f = _to_acb(factor)
        return BivarPoly(self.n, tuple(c * f for c in self.coeffs))

    def raise_degree(self, n: int) -> "BivarPoly":
        """The same polynomial viewed in P_n for n >= self.n."""
        if n < self.n:
            raise InvalidSpec("cannot lower the degree")
        return BivarPoly.from_dict(n, dict(self.items()))

    # evaluation ---------------------------------------------------------------

    def rows(self) -> list[acb_poly]:
        """Q_k(z) with P = sum_k w^k Q_k(z)."""
        per_k: list[list[acb]] = [[acb(0)] * (self.n + 1) for _ in range(self.n + 1)]
        for (j, k), c in self.items():
            per_k[k][j] = c
        return [acb_poly(row) for row in per_k]

    def evaluate(self, z: acb, w: acb) -> acb:
        out = acb(0)
        for q in reversed(self.rows()):
            out = out * w + q(z)
        return out

    def nodes(self, alpha_ball: arb) -> list[arb]:
        """lambda_jk = j + k alpha in index order."""
        return [j + k * alpha_ball for j, k in self.index]

    def curve_value(self, z: acb, alpha_ball: arb) -> acb:
        """f(z) = P(e^z, e^{alpha z}) evaluated term by term."""
        out = acb(0)
        for lam, c in zip(self.nodes(alpha_ball), self.coeffs):
            if not c.is_zero():
                out += c * (lam * z).exp()
        return out

    def taylor(self, alpha_ball: arb, T: int) -> list[acb]:
        """f_t = sum c_jk lambda_jk^t / t!, t = 0..T (no tail bound)."""
        pairs = [(lam, c) for lam, c in zip(self.nodes(alpha_ball), self.coeffs) if not c.is_zero()]
        powers = [acb(c) for _, c in pairs]
        out = []
        for t in range(T + 1):
            if t > 0:
                powers = [pw * lam / t for pw, (lam, _) in zip(powers, pairs)]
            total = acb(0)
            for pw in powers:
                total += pw
            out.append(total)
        return out

    def derivatives_at_zero(self, alpha_ball: arb, T: int) -> list[acb]:
        """f^(t)(0) = sum c_jk lambda_jk^t."""
        pairs = [(lam, c) for lam, c in zip(self.nodes(alpha_ball), self.coeffs) if not c.is_zero()]
        powers = [acb(c) for _, c in pairs]
        out = []
        for t in range(T + 1):
            if t > 0:
                powers = [pw * lam for pw, (lam, _) in zip(powers, pairs)]
            total = acb(0)
            for pw in powers:
                total += pw
            out.append(total)
        return out

    # serialization --------------------------------------------------------------

    def to_strings(self, digits: int) -> list[list]:
        return [[j, k, ball_str(c.real, digits), ball_str(c.imag, digits)]
                for (j, k), c in self.items()]

    @classmethod
    def from_strings(cls, n: int, rows: Sequence[Sequence]) -> "BivarPoly":
        vals = {}
        for j, k, re_s, im_s in rows:
            vals[(int(j), int(k))] = cball_parse([re_s, im_s])
        return cls.from_dict(n, vals)
