"""Acceptance criteria, one printed PASS/FAIL line each.

Tolerances and runtime budgets are the ones fixed in the project contract.
Criterion 6 cannot hold as stated (the growth inequality fails at n = 2 for
every alpha), so its test is a strict xfail that prints FAIL; see
notes/decisions.md for the analysis.
"""

import subprocess
import sys
import time

import pytest

from expcurve import Verdict, parse_alpha
from expcurve.alpha_gen import (
    diophantine_profile, logonly_cross_check, make_s_member, smember_exponent,
)
from expcurve.balls import all_verdicts, le
from expcurve.cf_core import (
    convergent_table, determinant_identity_check, lagrange_best_check, lagrange_monotone_check,
    psqs_bounds_check,
)
from expcurve.dalpha_bounds import (
    aux_inequalities_check, lemma_dalpha_check, lemma_factorial_grid, lemma_split_sweep,
)
from expcurve.exceptional_sets import (
    EpsilonSeq, HFunction, enreg_diagnostic, hausdorff_term, polar_potential, remark_rows,
)
from expcurve.transcendence import (
    BivarPoly, certificate_explicit, certificate_nullspace, certificate_to_json, en_lower,
    en_upper, simplex, verify_certificate,
)
from expcurve.transcendence.bounds import corollary_dio_check, corollary_endio_check
from expcurve.transcendence.upper import (
    beta_product, coeff_bound_check, interpolation_identity_check, node_vanishing,
)

THREE = ("golden", "sqrt2m1", "surd12")


def report(capsys, k, ok, what, seconds, budget):
    limit = f", budget {budget}s" if budget else ""
    line = f"[criterion {k}] {'PASS' if ok else 'FAIL'}: {what} ({seconds:.1f}s{limit})"
    with capsys.disabled():
        print("\n" + line)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_1_classical_cf(capsys):
    def run():
        checks = []
        for name in THREE:
            a = parse_alpha(name)
            checks.append(determinant_identity_check(a, 30))
            checks.extend(psqs_bounds_check(s, a) for s in range(31))
            checks.append(lagrange_monotone_check(a, 30))
            checks.extend(lagrange_best_check(s, a) for s in range(1, 13))
        return all_verdicts(checks)

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 10
    report(capsys, 1, ok, "CF identities, bounds and Lagrange checks, s <= 30", dt, 10)
    assert ok


def test_criterion_2_lemmas(capsys):
    def run():
        checks = []
        for name in THREE:
            a = parse_alpha(name)
            checks.append(lemma_factorial_grid(a)["verdict"])
            # includes the partition side conditions for every n
            checks.extend(lemma_dalpha_check(n, a).verdict for n in range(1, 501))
            checks.extend(r.verdict for r in lemma_split_sweep(a, 200))
        checks.append(aux_inequalities_check(10_000)["verdict"])
        return all_verdicts(checks)

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 120
    report(capsys, 2, ok, "factorial grid, D_alpha, split, Stirling, partitions", dt, 120)
    assert ok


def test_criterion_3_sandwich(capsys):
    def run():
        checks = []
        for name in ("golden", "sqrt2m1"):
            a = parse_alpha(name)
            checks.extend(le(en_lower(n, a), en_upper(n, a)) for n in range(1, 65))
        g = parse_alpha("golden")
        lo_, hi_ = en_lower(10, g), en_upper(10, g)
        checks += [le(15.12, lo_), le(lo_, 15.14), le(1018.2, hi_), le(hi_, 1018.5)]
        return all_verdicts(checks)

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 5
    report(capsys, 3, ok, "en_lower <= en_upper for n <= 64, n=10 golden values", dt, 5)
    assert ok


def test_criterion_4_certificates(capsys):
    g = parse_alpha("golden")

    def run():
        checks = []
        for n in (8, 13, 21):
            cert = certificate_explicit(n, g, 512)
            checks.append(cert.extras["floor_verdict"])
            checks.append(verify_certificate(certificate_to_json(cert)).verdict)
        for n in range(1, 9):
            cert = certificate_nullspace(n, g, 512)
            checks += [cert.extras["vanishing"], cert.extras["consistent"]]
            checks.append(verify_certificate(certificate_to_json(cert)).verdict)
        return all_verdicts(checks)

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 300
    report(capsys, 4, ok, "explicit floors, null-space vanishing, JSON re-verification", dt, 300)
    assert ok


def test_criterion_5_machinery(capsys):
    g = parse_alpha("golden")

    def run():
        checks = [node_vanishing(n, l, m, g)["verdict"]
                  for n in range(1, 6) for l, m in simplex(n)]
        checks += [beta_product(8, l, m, g).chain_verdict for l, m in simplex(8)]
        for seed in range(50):
            P = BivarPoly.random(1 + seed % 6, seed)
            checks.append(coeff_bound_check(P, g)["verdict"])
            if P.n <= 3:
                checks += [interpolation_identity_check(P, l, m, g)["verdict"]
                           for l, m in simplex(P.n)]
        return all_verdicts(checks)

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 180
    report(capsys, 5, ok, "node vanishing, beta chain, coefficient bound, interpolation", dt, 180)
    assert ok


def _criterion_6_parts():
    parts = {}
    for name in ("golden", "sqrt2m1"):
        a = parse_alpha(name)
        parts[f"dio {name}"] = all_verdicts(corollary_dio_check(n, a)["verdict"]
                                            for n in range(1, 101))
    g = parse_alpha("golden")
    parts["endio golden"] = corollary_endio_check(g, 2, 25, 100)["verdict"]
    enreg = enreg_diagnostic(g, 25, 200)
    parts["enreg consistency"] = enreg.consistency_verdict
    parts["enreg growth n>=2"] = enreg.growth_verdict(2)
    parts["enreg growth n>=3"] = enreg.growth_verdict(3)
    return parts, enreg


@pytest.mark.xfail(strict=True, reason="(C+10) n^2 ln n < en_upper(n) at n = 2 for every alpha")
def test_criterion_6_corollaries(capsys):
    (parts, enreg), dt = timed(_criterion_6_parts)
    literal = {k: v for k, v in parts.items() if k != "enreg growth n>=3"}
    ok = all_verdicts(literal.values()) is Verdict.TRUE and dt < 60
    detail = ", ".join(f"{k}={v}" for k, v in parts.items())
    report(capsys, 6, ok, f"{detail}; failing n = {enreg.failing_growth_rows()}", dt, 60)
    assert ok


def test_criterion_6_attainable_parts():
    parts, _ = _criterion_6_parts()
    parts.pop("enreg growth n>=2")
    assert all(v is Verdict.TRUE for v in parts.values()), parts


def test_criterion_7_smember(capsys):
    def run():
        a = make_s_member([0, 2])
        rows = convergent_table(a, 2)
        prof = diophantine_profile(a, 3)
        ln_q3 = prof.rows[1].ln_q_s1
        _, cross = logonly_cross_check(a, 4)
        return all_verdicts([
            Verdict.TRUE if rows[2].q == 33 else Verdict.FALSE,
            Verdict.TRUE if smember_exponent(2, 33) == 10987 else Verdict.FALSE,
            le(7619.1, ln_q3), le(ln_q3, 7619.3),
            prof.strictly_increasing_scores(), cross,
        ])

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 5
    report(capsys, 7, ok, "q_2 = 33, a_3 = 2^10987, ln q_3, scores, LogOnly cross-check", dt, 5)
    assert ok


def test_criterion_8_diagnostics(capsys):
    def run():
        term = hausdorff_term(HFunction(2), 10)
        pot = polar_potential(1j, EpsilonSeq("power", 3), 10_000)
        return all_verdicts([
            le(1.514e-2 - 1e-4, term), le(term, 1.514e-2 + 1e-4),
            pot.nonincreasing, le(-1.8074, pot.value),
            *(r[3] for r in remark_rows(20)),
        ])

    v, dt = timed(run)
    ok = v is Verdict.TRUE and dt < 30
    report(capsys, 8, ok, "Hausdorff term, potential at i, remark formula", dt, 30)
    assert ok


def test_criterion_9_determinism(capsys, tmp_path):
    def run():
        outs = []
        for i in range(2):
            path = tmp_path / f"suite{i}.json"
            code = subprocess.run(
                [sys.executable, "-m", "expcurve", "verify", "--suite", "all",
                 "--output", str(path)], check=False).returncode
            outs.append((code, path.read_bytes()))
        return outs

    outs, dt = timed(run)
    ok = outs[0] == outs[1] and outs[0][0] == 0
    report(capsys, 9, ok, "two suite runs give byte-identical reports", dt, None)
    assert ok
