import math

import pytest

from expcurve import InvalidSpec, Verdict
from expcurve.transcendence import BivarPoly, simplex
from expcurve.transcendence.upper import (
    beta_product, beta_regrouped, chain_bound, coeff_bound_check, interpolation_identity_check,
    node_vanishing,
)

PHI = (5 ** 0.5 - 1) / 2


def float_beta(n, l, m, a):
    out = 1.0
    for j, k in simplex(n):
        if (j, k) != (l, m):
            out *= (l - j) + (m - k) * a
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_beta_matches_float_product(golden, n):
    for l, m in simplex(n):
        b = beta_product(n, l, m, golden)
        assert float(b.value.mid()) == pytest.approx(float_beta(n, l, m, PHI), rel=1e-9)
        assert float(b.ln_abs.mid()) == pytest.approx(math.log(abs(float_beta(n, l, m, PHI))),
                                                      abs=1e-9)



def test_beta_degree_one(golden):
    # nodes 0, alpha, 1
    assert float(beta_product(1, 0, 0, golden).value.mid()) == pytest.approx(PHI)
    assert float(beta_product(1, 0, 1, golden).value.mid()) == pytest.approx(PHI * (PHI - 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_node_vanishing(golden, n):
    for l, m in simplex(n):
        assert node_vanishing(n, l, m, golden)["verdict"] is Verdict.TRUE


def test_chain_bound_n8(golden):
    assert all(beta_product(8, l, m, golden).chain_verdict is Verdict.TRUE
               for l, m in simplex(8))


def test_chain_bound_formula(golden):
    # n = 8 golden: s = 5, q_5 = 8, q_6 = 13
    expected = 32 * math.log(8) - 4.2 * 64 - math.log(13)
    assert float(chain_bound(8, golden).mid()) == pytest.approx(expected)


@pytest.mark.parametrize("n,l,m", [(3, 1, 1), (5, 2, 0), (6, 0, 3), (8, 3, 2)])
def test_regrouping(golden, n, l, m):
    r = beta_regrouped(n, l, m, golden)
    assert r["regrouping_overlap"] is Verdict.TRUE
    assert r["A1_bound"] is Verdict.TRUE
    assert r["A2_bound"] is Verdict.TRUE


@pytest.mark.parametrize("seed", range(12))
def test_interpolation_identity(golden, seed):
    P = BivarPoly.random(1 + seed % 3, seed)
    for l, m in simplex(P.n):
        assert interpolation_identity_check(P, l, m, golden)["verdict"] is Verdict.TRUE


@pytest.mark.parametrize("seed", range(50))
def test_coeff_bound_seeded(golden, seed):
    P = BivarPoly.random(1 + seed % 6, seed)
    assert coeff_bound_check(P, golden)["verdict"] is Verdict.TRUE


def test_coeff_bound_single_monomial(golden):
    r = coeff_bound_check(BivarPoly.monomial(1, 0, 1), golden)
    # c = e^-alpha after normalization, beta_01 = alpha (alpha - 1)
    exact = -PHI + math.log(PHI * (1 - PHI))
    # the norm upper bound is a little above e^alpha
    assert exact - 2e-3 <= float(r["worst_ln"].mid()) <= exact
    assert r["verdict"] is Verdict.TRUE


def test_outside_simplex(golden):
    with pytest.raises(InvalidSpec):
        node_vanishing(2, 2, 1, golden)
