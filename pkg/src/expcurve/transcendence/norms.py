"""Certified sup-norm enclosures on K = {(e^z, e^{alpha z}): |z| <= 1} and on the bidisk.

By the maximum principle both suprema are attained on circles, so the work is
bounding a trigonometric polynomial g(theta) from above on arcs (or boxes).
On an arc of half-width h around theta_c

    |g(theta_c + u)| <= max(|a + h b|, |a - h b|) + (h^2 sigma^2 / 2) ||g||

where a = g(theta_c), b = g'(theta_c) and sigma is the half-bandwidth of the
frequencies of g after centring them (Bernstein's inequality applied twice).
Taking the maximum over arcs gives an upper bound that still contains ||g||
on the right; since the coefficients h^2 sigma^2 / 2 are < 1 it is resolved by
iterating from any valid starting bound.  Lower bounds are plain point
evaluations.

On K the function f(z) = sum c_jk e^{lambda_jk z} is replaced by its Taylor
polynomial of degree T plus an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from flint import acb, acb_poly, arb

from ..balls import to_arb, working_precision
from ..cf_core import AlphaSpec, alpha_ball
from ..errors import InvalidSpec
from .poly import BivarPoly

DEFAULT_K_TARGET = 2.0**-10
DEFAULT_BIDISK_TARGET = 2.0**-7
MAX_ARCS = 20_000
MAX_BOXES = 20_000


@dataclass(frozen=True)
class NormEnclosure:
    domain: str  # "K_circle" or "bidisk_torus"
    lower: arb
    upper: arb
    grid: int
    slack: arb
    converged: bool
    precision: int
    method: str

    @property
    def value(self) -> arb:
        return self.lower.union(self.upper)

    def ln_lower(self) -> arb:
        return self.lower.log() if self.lower > 0 else arb("-inf")

    def ln_upper(self) -> arb:
        return self.upper.log()

    def relative_width(self) -> float:
        if not self.lower > 0:
            return math.inf
        return float(((self.upper - self.lower) / self.lower).upper())


def _upper(x: arb) -> arb:
    return arb(x.upper())


def _lower(x: arb) -> arb:
    v = x.lower()
    return arb(0) if v < 0 else arb(v)


def _pi_point(x: Fraction) -> acb:
    """e^{i pi x} for an exact rational x."""
    return acb(to_arb(x)).exp_pi_i()


def _fix_G(Ls: list[arb], cs: list[arb], G: arb, rounds: int = 6) -> arb:
    """Iterate G <- max_i (L_i + c_i G); every iterate stays a valid bound."""
    for _ in range(rounds):
        new = arb(0)
        for L, c in zip(Ls, cs):
            new = new.max(L + c * G)
        new = _upper(new)
        if not new < G:
            break
        G = new
    return G


# --------------------------------------------------------------------------
# K: the curve over the closed unit disk
# --------------------------------------------------------------------------


def _taylor_tail(sum_abs: arb, lam_max: arb, T: int) -> arb:
    """Upper bound for sum_abs * sum_{t>T} lam_max^t / t!."""
    if lam_max.is_zero():
        return arb(0)
    ratio = lam_max / (T + 2)
    if not ratio < 1:
        return arb("inf")
    term = lam_max ** (T + 1) / arb(T + 2).gamma()
    return _upper(sum_abs * term / (1 - ratio))


def _pick_T(sum_abs: arb, lam_max: arb, tol: arb, floor: int) -> int:
    T = max(floor, int(math.e * float(lam_max.upper())) + 4)
    while True:
        tail = _taylor_tail(sum_abs, lam_max, T)
        if tail <= tol:
            return T
        T += 8


def _sample_points(P: BivarPoly, a: arb, count: int = 16) -> arb:
    best = arb(0)
    for i in range(count):
        z = _pi_point(Fraction(2 * i, count) - 1)
        best = best.max(_lower(abs(P.curve_value(z, a))))
    return best


def _arc_bound(poly: acb_poly, dpoly: acb_poly, c0: arb, x: Fraction, w: Fraction):
    z = _pi_point(x)
    Fz = poly(z)
    b = acb(0, 1) * (z * dpoly(z) - c0 * Fz)
    h = arb.pi() * to_arb(w)
    L = _upper(abs(Fz + h * b)).max(_upper(abs(Fz - h * b)))
    return L, _lower(abs(Fz)), _upper(h * h)


def _circle_sup(poly: acb_poly, sigma: float, c0: arb, G0: arb, target: float,
                err: arb, max_arcs: int):
    """Adaptive arcs for sup |poly| on |z| = 1; returns (lower_main, upper_main, arcs, converged)."""
    sig2 = arb(sigma) ** 2 / 2
    dpoly = poly.derivative()
    K0 = 1
    while K0 < max(8, 4 * sigma):
        K0 *= 2
    w0 = Fraction(1, K0)
    arcs = []
    for i in range(K0):
        x = Fraction(2 * i + 1, K0) - 1
        L, low, h2 = _arc_bound(poly, dpoly, c0, x, w0)
        arcs.append([x, w0, L, low, h2])
    G = _upper(G0)
    factor = 1 + arb(target) / 2
    while True:
        G = _fix_G([a[2] for a in arcs], [a[4] * sig2 for a in arcs], G)
        lower_main = arb(0)
        for a in arcs:
            lower_main = lower_main.max(a[3])
        Us = [a[2] + a[4] * sig2 * G for a in arcs]
        upper_main = arb(0)
        for U in Us:
            upper_main = upper_main.max(_upper(U))
        lower_f = lower_main - err
        if lower_f > 0 and (upper_main + err - lower_f) <= arb(target) * lower_f:
            return lower_main, upper_main, len(arcs), True
        threshold = lower_main * factor
        split = [i for i, U in enumerate(Us) if not U <= threshold]
        if not split or len(arcs) + len(split) > max_arcs:
            return lower_main, upper_main, len(arcs), not split
        keep = [a for i, a in enumerate(arcs) if i not in set(split)]
        for i in split:
            x, w = arcs[i][0], arcs[i][1]
            hw = w / 2
            for xc in (x - hw, x + hw):
                L, low, h2 = _arc_bound(poly, dpoly, c0, xc, hw)
                keep.append([xc, hw, L, low, h2])
        keep.sort(key=lambda a: a[0])
        arcs = keep


def norm_on_K(P: BivarPoly, alpha: AlphaSpec, target_rel_width: float = DEFAULT_K_TARGET,
              precision: int = 256, max_arcs: int = MAX_ARCS) -> NormEnclosure:
    """Enclosure of sup_{|z|<=1} |P(e^z, e^{alpha z})|."""
    if not P.is_nonzero():
        raise InvalidSpec("norm_on_K needs a nonzero polynomial")
    with working_precision(precision):
        a = alpha_ball(alpha, precision)
        lams = [lam for lam, c in zip(P.nodes(a), P.coeffs) if not c.is_zero()]
        lam_max = arb(0)
        for lam in lams:
            lam_max = lam_max.max(_upper(abs(lam)))
        sum_abs = P.sum_abs()
        est = _sample_points(P, a)
        if not est > 0:
            est = sum_abs * arb(2) ** (-precision // 2)
        tol = est * arb(target_rel_width) / 16
        T = _pick_T(sum_abs, lam_max, tol, floor=0)
        for _attempt in range(4):
            coeffs = P.taylor(a, T)
            tail = _taylor_tail(sum_abs, lam_max, T)
            tmin = 0
            small = arb(0)
            while tmin < T and coeffs[tmin].contains(0):
                small += coeffs[tmin].abs_upper()
                tmin += 1
            err = _upper(tail + small)
            top = T
            while top > tmin and coeffs[top].is_zero():
                top -= 1
            main = [acb(0)] * tmin + coeffs[tmin:top + 1]
            poly = acb_poly(main)
            sigma = (top - tmin) / 2
            c0 = arb(top + tmin) / 2
            G0 = arb(0)
            for c in main:
                G0 += c.abs_upper()
            lo_m, up_m, grid, conv = _circle_sup(poly, sigma, c0, G0, target_rel_width,
                                                err, max_arcs)
            lower = _lower(lo_m - err)
            upper = _upper(up_m + err)
            if lower > 0 and not err <= lower * arb(target_rel_width) / 4:
                T += 16
                continue
            break
        return NormEnclosure("K_circle", lower, upper, grid, err, conv, precision,
                             f"taylor{T}+bernstein")


def norm_on_K_direct(P: BivarPoly, alpha: AlphaSpec, arcs: int = 4096,
                     precision: int = 256) -> NormEnclosure:
    """Uniform arcs with the global bound |g'| <= sum |c| lambda e^lambda (cross-check only)."""
    with working_precision(precision):
        a = alpha_ball(alpha, precision)
        deriv = arb(0)
        for lam, c in zip(P.nodes(a), P.coeffs):
            deriv += c.abs_upper() * _upper(abs(lam)) * _upper(abs(lam)).exp()
        h = arb.pi() / arcs
        lower = arb(0)
        upper = arb(0)
        for i in range(arcs):
            z = _pi_point(Fraction(2 * i + 1, arcs) - 1)
            v = abs(P.curve_value(z, a))
            lower = lower.max(_lower(v))
            upper = upper.max(_upper(v + h * deriv))
        return NormEnclosure("K_circle", lower, upper, arcs, _upper(h * deriv), True,
                             precision, "direct")


# --------------------------------------------------------------------------
# bidisk: the torus |z| = |w| = 1
# --------------------------------------------------------------------------


class _TorusEval:
    def __init__(self, P: BivarPoly):
        (jmin, jmax), (kmin, kmax) = P.degree_ranges()
        self.rows = P.rows()
        self.drows = [q.derivative() for q in self.rows]
        self.c1 = arb(jmin + jmax) / 2
        self.c2 = arb(kmin + kmax) / 2
        self.s1 = (jmax - jmin) / 2
        self.s2 = (kmax - kmin) / 2

    def at(self, z: acb, w: acb):
        val = acb(0)
        dz = acb(0)
        dw = acb(0)
        for q, dq in zip(reversed(self.rows), reversed(self.drows)):
            dw = dw * w + val
            val = val * w + q(z)
            dz = dz * w + dq(z)
        return val, dz, dw


def _box_bound(ev: _TorusEval, x1: Fraction, w1: Fraction, x2: Fraction, w2: Fraction):
    z, w = _pi_point(x1), _pi_point(x2)
    v, dz, dw = ev.at(z, w)
    i = acb(0, 1)
    b1 = i * (z * dz - ev.c1 * v)
    b2 = i * (w * dw - ev.c2 * v)
    h1 = arb.pi() * to_arb(w1)
    h2 = arb.pi() * to_arb(w2)
    L = arb(0)
    for s1 in (1, -1):
        for s2 in (1, -1):
            L = L.max(_upper(abs(v + s1 * h1 * b1 + s2 * h2 * b2)))
    spread = _upper((h1 * ev.s1 + h2 * ev.s2) ** 2 / 2)
    return L, _lower(abs(v)), spread


def norm_on_bidisk(P: BivarPoly, target_rel_width: float = DEFAULT_BIDISK_TARGET,
                   precision: int = 256, max_boxes: int = MAX_BOXES,
                   hint_points: tuple = ()) -> NormEnclosure:
    """Enclosure of sup over the closed bidisk; always within [max|c|, sum|c|]."""
    if not P.is_nonzero():
        raise InvalidSpec("norm_on_bidisk needs a nonzero polynomial")
    with working_precision(precision):
        sum_abs = _upper(P.sum_abs())
        max_c = P.max_abs_lower()
        hint_low = arb(0)
        for z, w in hint_points:
            hint_low = hint_low.max(_lower(abs(P.evaluate(z, w))))
        base_lower = max_c.max(hint_low)
        if base_lower > 0 and (sum_abs - base_lower) <= arb(target_rel_width) * base_lower:
            return NormEnclosure("bidisk_torus", base_lower, sum_abs, 0, arb(0), True,
                                 precision, "coefficient sandwich")
        ev = _TorusEval(P)
        K1 = 1
        while K1 < max(4, 4 * ev.s1):
            K1 *= 2
        K2 = 1
        while K2 < max(4, 4 * ev.s2):
            K2 *= 2
        boxes = []
        for i in range(K1):
            for j in range(K2):
                x1 = Fraction(2 * i + 1, K1) - 1
                x2 = Fraction(2 * j + 1, K2) - 1
                L, low, sp = _box_bound(ev, x1, Fraction(1, K1), x2, Fraction(1, K2))
                boxes.append([x1, Fraction(1, K1), x2, Fraction(1, K2), L, low, sp])
        G = sum_abs
        factor = 1 + arb(target_rel_width) / 2
        converged = False
        while True:
            G = _fix_G([b[4] for b in boxes], [b[6] for b in boxes], G)
            lower = base_lower
            for b in boxes:
                lower = lower.max(b[5])
            Us = [b[4] + b[6] * G for b in boxes]
            upper = arb(0)
            for U in Us:
                upper = upper.max(_upper(U))
            upper = upper.min(sum_abs)
            if lower > 0 and (upper - lower) <= arb(target_rel_width) * lower:
                converged = True
                break
            threshold = lower * factor
            split = [i for i, U in enumerate(Us) if not U <= threshold]
            if not split:
                converged = True
                break
            if len(boxes) + len(split) > max_boxes:
                break
            split_set = set(split)
            keep = [b for i, b in enumerate(boxes) if i not in split_set]
            for i in split:
                x1, w1, x2, w2 = boxes[i][:4]
                if w1 * ev.s1 >= w2 * ev.s2:
                    halves = [(x1 - w1 / 2, w1 / 2, x2, w2), (x1 + w1 / 2, w1 / 2, x2, w2)]
                else:
                    halves = [(x1, w1, x2 - w2 / 2, w2 / 2), (x1, w1, x2 + w2 / 2, w2 / 2)]
                for hx1, hw1, hx2, hw2 in halves:
                    L, low, sp = _box_bound(ev, hx1, hw1, hx2, hw2)
                    keep.append([hx1, hw1, hx2, hw2, L, low, sp])
            keep.sort(key=lambda b: (b[0], b[2]))
            boxes = keep
        return NormEnclosure("bidisk_torus", lower, upper, len(boxes), arb(0), converged,
                             precision, "boxes+bernstein")
