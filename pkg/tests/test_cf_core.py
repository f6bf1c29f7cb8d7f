"""Continued fractions against closed forms and brute force."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from expcurve import InvalidSpec, Literal, LogOnly, PeriodicCF, Verdict, parse_alpha
from expcurve.cf_core import (
    cf_expand, convergent_table, convergents, determinant_identity_check, dist_to_Z,
    eval_alpha, lagrange_best_check, lagrange_monotone_check, legendre_test, locate_index,
    psqs_bounds_check, q_growth_check,
)

FIB = [1, 1]
while len(FIB) < 40:
    FIB.append(FIB[-1] + FIB[-2])


def test_golden_convergents_are_fibonacci_ratios(golden):
    rows = convergent_table(golden, 30)
    for s, row in enumerate(rows):
        # [0;1,1,...]: p_s = F_{s-1}, q_s = F_s with F_0 = F_1 = 1
        assert row.q == FIB[s]
        assert row.p == (0 if s == 0 else FIB[s - 1])


def test_sqrt2m1_denominators_are_pell(sqrt2m1):
    pell = [1, 2]
    while len(pell) < 20:
        pell.append(2 * pell[-1] + pell[-2])
    assert [r.q for r in convergent_table(sqrt2m1, 19)] == pell


def test_periodic_expansion(surd12):
    assert cf_expand(surd12, 6) == [0, 1, 2, 1, 2, 1, 2]


def test_eval_alpha_matches_closed_form(golden):
    x = eval_alpha(golden, 200)
    assert x.overlaps((5 ** 0.5 - 1) / 2) or abs(float(x.mid()) - (5 ** 0.5 - 1) / 2) < 1e-15
    assert float(x.rad()) < 2.0 ** -150


@pytest.mark.parametrize("name", ["golden", "sqrt2m1", "surd12"])
def test_classical_identities_to_depth_30(name):
    a = parse_alpha(name)
    assert determinant_identity_check(a, 30) is Verdict.TRUE
    assert q_growth_check(a, 30) is Verdict.TRUE
    assert lagrange_monotone_check(a, 30) is Verdict.TRUE
    for s in range(31):
        assert psqs_bounds_check(s, a) is Verdict.TRUE


@pytest.mark.parametrize("name", ["golden", "sqrt2m1", "surd12"])
def test_lagrange_best_approximation(name):
    a = parse_alpha(name)
    for s in range(1, 13):
        assert lagrange_best_check(s, a) is Verdict.TRUE


def test_monotone_example_value(golden):
    # |8a - 5| ~ 0.05573 < |5a - 3| ~ 0.09017
    a = (5 ** 0.5 - 1) / 2
    assert abs(8 * a - 5) == pytest.approx(0.05573, abs=1e-5)
    assert abs(5 * a - 3) == pytest.approx(0.09017, abs=1e-5)
    assert lagrange_monotone_check(golden, 5) is Verdict.TRUE


def test_dist_to_Z_brute_force(golden):
    a = (5 ** 0.5 - 1) / 2
    for k in range(1, 60):
        p, d = dist_to_Z(k, golden)
        assert p == round(k * a)
        assert float(d.mid()) == pytest.approx(abs(k * a - round(k * a)), rel=1e-9)


def test_locate_index(golden):
    rows = convergent_table(golden, 10)
    assert locate_index(10, rows) == 5  # q_5 = 8 <= 10 < 13
    assert locate_index(8, rows) == 5
    assert locate_index(1, rows) == 1


def test_legendre(golden):
    assert legendre_test(5, 8, golden).conclusion is Verdict.TRUE
    # 2/5 is no good approximation, the hypothesis fails
    assert legendre_test(2, 5, golden).conclusion is None


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 50), min_size=1, max_size=12))
def test_convergents_match_fraction_evaluation(quotients):
    conv = convergents([0] + quotients)
    for s, row in enumerate(conv):
        value = Fraction(0)
        for a in reversed(quotients[:s]):
            value = 1 / (a + value)
        assert Fraction(row.p, row.q) == value
        assert math.gcd(row.p, row.q) == 1


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=3),
       st.lists(st.integers(1, 9), min_size=1, max_size=3))
def test_determinant_identity_random_quadratics(pre, per):
    a = PeriodicCF((0, *pre), tuple(per))
    assert determinant_identity_check(a, 20) is Verdict.TRUE
    assert psqs_bounds_check(10, a) is Verdict.TRUE


def test_digit_cap_switches_to_logonly():
    a = parse_alpha("rule:smember:prefix=[0;2]")
    rows = convergent_table(a, 4)
    assert rows[2].q == 33
    assert isinstance(rows[4].q, LogOnly)


@pytest.mark.parametrize("text", ["bogus", "periodic:[0;1,1]", "rule:nope:prefix=[0;1]",
                                  "periodic:[x;|1]"])
def test_invalid_specs(text):
    with pytest.raises(InvalidSpec):
        parse_alpha(text)


def test_literal_parsing():
    a = parse_alpha("literal:0.41421356237309504880168872")
    assert isinstance(a, Literal)
    assert cf_expand(a, 5) == [0, 2, 2, 2, 2, 2]
