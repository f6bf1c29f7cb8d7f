import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from expcurve import InvalidSpec
from expcurve.transcendence import (
    BivarPoly, dimension, norm_on_K, norm_on_K_direct, norm_on_bidisk, simplex, vanishing_order,
)

PHI = (5 ** 0.5 - 1) / 2


def contains(enc, x, tol=0.0):
    return float(enc.lower) - tol <= x <= float(enc.upper) + tol


def sampled_K(coeffs, a, points=20000):
    best = 0.0
    for t in range(points):
        z = cmath.exp(2j * math.pi * t / points)
        best = max(best, abs(sum(c * cmath.exp(z) ** j * cmath.exp(a * z) ** k
                                 for (j, k), c in coeffs.items())))
    return best


def test_simplex_counts():
    for n in range(8):
        assert len(simplex(n)) == dimension(n) == vanishing_order(n) + 1


def test_binomial_power_expansion():
    P = BivarPoly.binomial_power(4, 1, 1, 2)  # z^2 - 2zw + w^2
    assert float(P.coeff(2, 0).real.mid()) == 1
    assert float(P.coeff(1, 1).real.mid()) == -2
    assert float(P.coeff(0, 2).real.mid()) == 1
    with pytest.raises(InvalidSpec):
        BivarPoly.binomial_power(3, 2, 1, 2)


def test_string_round_trip():
    P = BivarPoly.random(3, 7)
    Q = BivarPoly.from_strings(3, P.to_strings(40))
    for a, b in zip(P.coeffs, Q.coeffs):
        assert a.overlaps(b)


@pytest.mark.parametrize("coeffs,expected", [
    ({(0, 0): 1}, 1.0),
    ({(1, 0): 1}, math.e),
    ({(0, 1): 1}, math.exp(PHI)),
    ({(2, 1): 1}, math.exp(2 + PHI)),
])
def test_K_norm_of_monomials(golden, coeffs, expected):
    n = max(j + k for j, k in coeffs)
    enc = norm_on_K(BivarPoly.from_dict(n, coeffs), golden)
    assert contains(enc, expected, 1e-12)
    assert enc.relative_width() < 1e-3


@pytest.mark.parametrize("coeffs", [
    {(1, 0): 1, (0, 1): -1},
    {(0, 0): 1, (1, 0): 2, (0, 2): -3},
    {(3, 0): 1, (0, 2): -1},
])
def test_K_norm_against_sampling(golden, coeffs):
    n = max(j + k for j, k in coeffs)
    P = BivarPoly.from_dict(n, coeffs)
    enc = norm_on_K(P, golden)
    sample = sampled_K(coeffs, PHI)
    assert float(enc.upper) >= sample * (1 - 1e-12)
    assert float(enc.lower) <= sample * (1 + 1e-3)
    assert enc.value.overlaps(norm_on_K_direct(P, golden).value)


@pytest.mark.parametrize("coeffs,expected", [
    ({(0, 0): 1}, 1.0),
    ({(1, 0): 1, (0, 1): 1}, 2.0),
    ({(1, 0): 1, (0, 1): -1}, 2.0),
    ({(0, 0): 1, (1, 0): 1, (0, 1): 1}, 3.0),
    ({(1, 1): 1, (0, 0): -1}, 2.0),
])
def test_bidisk_norm_closed_forms(coeffs, expected):
    n = max(j + k for j, k in coeffs)
    enc = norm_on_bidisk(BivarPoly.from_dict(n, coeffs))
    assert contains(enc, expected, 1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10_000))
def test_bidisk_norm_between_coefficient_bounds(n, seed):
    P = BivarPoly.random(n, seed)
    enc = norm_on_bidisk(P)
    assert float(enc.lower) >= float(P.max_abs_lower()) * (1 - 1e-12)
    assert float(enc.upper) <= float(P.sum_abs().upper()) * (1 + 1e-12)


def test_zero_polynomial_rejected(golden):
    Z = BivarPoly.from_dict(1, {})
    with pytest.raises(InvalidSpec):
        norm_on_K(Z, golden)
    with pytest.raises(InvalidSpec):
        norm_on_bidisk(Z)
