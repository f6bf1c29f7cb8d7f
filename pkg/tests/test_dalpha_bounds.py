import math

import pytest
from hypothesis import given, settings, strategies as st

from expcurve import InvalidSpec, Verdict, parse_alpha
from expcurve.dalpha_bounds import (
    aux_inequalities_check, d_alpha, d_alpha_direct, lemma_dalpha_check, lemma_factorial_check,
    lemma_factorial_grid, lemma_split_check, lemma_split_sweep, partition_check,
    strictly_decreasing,
)

ALPHAS = ["golden", "sqrt2m1", "surd12"]


def float_ln_d(n, a):
    return sum(math.log(abs(k * a - round(k * a))) for k in range(1, n + 1))


def test_d_alpha_matches_float_oracle(golden):
    a = (5 ** 0.5 - 1) / 2
    for n in (1, 2, 10, 50):
        assert float(d_alpha(n, golden).mid()) == pytest.approx(float_ln_d(n, a), rel=1e-9)


def test_d_alpha_matches_direct_product(golden):
    for n in (7, 40, 120):
        assert d_alpha(n, golden).overlaps(d_alpha_direct(n, golden))


def test_d_alpha_decreasing(golden):
    # every factor is below 1/2
    assert strictly_decreasing(golden, 300) is Verdict.TRUE


@pytest.mark.parametrize("name", ALPHAS)
def test_factorial_grid(name):
    assert lemma_factorial_grid(parse_alpha(name))["verdict"] is Verdict.TRUE


def test_factorial_check_single(golden):
    r = lemma_factorial_check(-3, 4, 5, golden)
    assert r.verdict is Verdict.TRUE
    assert r.witness["inside"] == (-3 <= r.witness["nearest"] <= 4)


@pytest.mark.parametrize("name", ALPHAS)
def test_dalpha_lemma_to_500(name):
    a = parse_alpha(name)
    for n in range(1, 501):
        assert lemma_dalpha_check(n, a).verdict is Verdict.TRUE, n


def test_partition_sizes(golden):
    part = partition_check(100, golden)
    assert sum(part["sizes"]) == 100
    assert all(part["checks"].values())


@pytest.mark.parametrize("name", ALPHAS)
def test_split_sweep(name):
    assert all(r.verdict is Verdict.TRUE for r in lemma_split_sweep(parse_alpha(name), 200))


def test_split_endpoints_use_empty_product(golden):
    full = lemma_split_check(30, 0, golden)
    assert full.ln_lhs.overlaps(d_alpha(30, golden))


def test_aux_inequalities():
    rep = aux_inequalities_check(10_000)
    assert rep["verdict"] is Verdict.TRUE
    assert rep["first_failure"] == {}


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 400))
def test_dalpha_property_sqrt2(n):
    assert lemma_dalpha_check(n, parse_alpha("sqrt2m1"), with_partition=False).verdict \
        is Verdict.TRUE


def test_bad_inputs(golden):
    with pytest.raises(InvalidSpec):
        d_alpha(0, golden)
    with pytest.raises(InvalidSpec):
        lemma_split_check(5, 6, golden)
