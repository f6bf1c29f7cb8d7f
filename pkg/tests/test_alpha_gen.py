import math

import pytest

from expcurve import InvalidSpec, LogOnly, Verdict
from expcurve.alpha_gen import (
    diophantine_profile, logonly_cross_check, make_quadratic, make_s_member,
    register_custom_rule, smember_exponent,
)
from expcurve.cf_core import cf_expand, convergent_table, ln_magnitude, parse_alpha


def test_smember_exponent_oracle():
    # ceil(s q^2 log2 q), checked with exact integer comparisons
    for s, q in [(1, 2), (2, 33), (3, 7), (5, 10)]:
        e = smember_exponent(s, q)
        assert 2 ** (e - 1) < q ** (s * q * q) <= 2 ** e
    assert smember_exponent(2, 33) == 10987


def test_smember_depth_four_is_logonly():
    rows = convergent_table(make_s_member([0, 2]), 4)
    assert isinstance(rows[4].q, LogOnly)


def test_smember_construction():
    a = make_s_member([0, 2])
    rows = convergent_table(a, 3)
    assert [r.q for r in rows[:3]] == [1, 2, 33]
    assert rows[3].q == 2 ** 10987 * 33 + 2
    ln_q3 = ln_magnitude(rows[3].q)
    assert 7619.1 < float(ln_q3.lower()) and float(ln_q3.upper()) < 7619.3
    assert float(ln_q3.mid()) == pytest.approx(10987 * math.log(2) + math.log(33), abs=1e-9)


def test_smember_scores_increase():
    prof = diophantine_profile(make_s_member([0, 2]), 3)
    assert prof.strictly_increasing_scores() is Verdict.TRUE
    # the rule makes s_score(s) just above s
    for row in prof.rows:
        assert float(row.s_score.lower()) >= row.s - 1e-9


def test_logonly_cross_check():
    depth, v = logonly_cross_check(make_s_member([0, 2]), 4)
    assert v is Verdict.TRUE
    assert depth >= 2


def test_make_s_member_rejects_q1_one():
    with pytest.raises(InvalidSpec):
        make_s_member([0, 1])


def test_quadratic_profile_bounded(golden):
    prof = diophantine_profile(golden, 20, mu=2)
    # Fibonacci: q_{s+1}/q_s -> 1.618, so ln C stays below ln 2
    assert float(prof.ln_C_horizon().upper()) <= math.log(2) + 1e-12
    for row in prof.rows:
        if row.mu_s is not None and row.s >= 5:
            assert float(row.mu_s.mid()) == pytest.approx(1 + math.log(1.618034) / math.log(row.q_s)
                                                          + 1, abs=0.02)


def test_make_quadratic_matches_parse():
    assert make_quadratic([0], [1, 2]) == parse_alpha("surd12")


def test_custom_rule():
    register_custom_rule("const3", lambda s, q, qp, params, cap: 3)
    a = parse_alpha("rule:const3:prefix=[0;1]")
    assert cf_expand(a, 4) == [0, 1, 3, 3, 3]
    with pytest.raises(InvalidSpec):
        register_custom_rule("smember", lambda *args: 1)
