"""The full verification suite behind `expcurve verify --suite all`.

Every row is a certified inequality or an exact identity. Rows carry no
timings, so two runs with the same configuration give identical reports.
"""

from __future__ import annotations

from .alpha_gen import diophantine_profile, logonly_cross_check, make_s_member, smember_exponent
from .balls import Verdict, all_verdicts, le
from .cf_core import (
    convergent_table, determinant_identity_check, lagrange_best_check, lagrange_monotone_check,
    parse_alpha,
    psqs_bounds_check, q_growth_check,
)
from .dalpha_bounds import (
    aux_inequalities_check, lemma_dalpha_check, lemma_factorial_grid, lemma_split_sweep,
)
from .exceptional_sets import (
    EpsilonSeq, HFunction, enreg_diagnostic, hausdorff_term, polar_potential, remark_rows,
)
from .balls import interval_strings
from .report import Report, ball_text
from .transcendence.bounds import corollary_dio_check, corollary_endio_check, en_lower, en_upper
from .transcendence.certificates import (
    certificate_explicit, certificate_nullspace, certificate_to_json, verify_certificate,
)
from .transcendence.poly import BivarPoly, simplex
from .transcendence.upper import (
    beta_product, coeff_bound_check, interpolation_identity_check, node_vanishing,
)

ALPHA_LISTS = {
    "default": ("golden", "sqrt2m1", "surd12"),
    "quadratic": ("golden", "sqrt2m1"),
}
COLUMNS = ("group", "check", "alpha", "scope", "verdict", "detail")


def _floor_text(x) -> str:
    return interval_strings(x, 8)[0]


def _alphas(name: str):
    if name in ALPHA_LISTS:
        names = ALPHA_LISTS[name]
    else:
        names = tuple(x for x in name.split(",") if x)
    return [(text, parse_alpha(text)) for text in names]


class _Suite:
    def __init__(self, report: Report):
        self.report = report

    def row(self, group, check, alpha, scope, verdict, detail=""):
        self.report.add({"group": group, "check": check, "alpha": alpha, "scope": scope,
                         "verdict": verdict, "detail": detail}, verdict)


def _cf(s: _Suite, alphas, depth: int):
    for name, a in alphas:
        s.row("cf", "determinant identity", name, f"s<={depth}",
              determinant_identity_check(a, depth))
        s.row("cf", "q growth", name, f"s<={depth}", q_growth_check(a, depth))
        s.row("cf", "psqs bounds", name, f"s<={depth}",
              all_verdicts(psqs_bounds_check(k, a) for k in range(depth + 1)))
        s.row("cf", "Lagrange monotonicity", name, f"s<={depth}",
              lagrange_monotone_check(a, depth))
        s.row("cf", "Lagrange best approximation", name, "s<=12",
              all_verdicts(lagrange_best_check(k, a) for k in range(1, 13)))


def _lemmas(s: _Suite, alphas):
    for name, a in alphas:
        grid = lemma_factorial_grid(a)
        s.row("lemmas", "factorial product grid", name, "x,y in [-20,20], k<=50",
              grid["verdict"], f"{grid['checked']} checks")
        s.row("lemmas", "D_alpha lower bound + partition", name, "n<=500",
              all_verdicts(lemma_dalpha_check(n, a).verdict for n in range(1, 501)))
        s.row("lemmas", "split bound", name, "n<=200, all m",
              all_verdicts(r.verdict for r in lemma_split_sweep(a, 200)))
    aux = aux_inequalities_check(10_000)
    s.row("lemmas", "Stirling and sum k ln k", "-", "m<=10000", aux["verdict"],
          ";".join(f"{k}={v}" for k, v in sorted(aux["verdicts"].items())))


def _theorem(s: _Suite, alphas):
    for name, a in alphas[:2]:
        s.row("theorem", "sandwich en_lower <= en_upper", name, "n<=64",
              all_verdicts(le(en_lower(n, a), en_upper(n, a)) for n in range(1, 65)))
    g = parse_alpha("golden")
    s.row("theorem", "en_lower(10) in [15.12,15.14]", "golden", "n=10",
          all_verdicts([le(15.12, en_lower(10, g)), le(en_lower(10, g), 15.14)]))
    s.row("theorem", "en_upper(10) in [1018.2,1018.5]", "golden", "n=10",
          all_verdicts([le(1018.2, en_upper(10, g)), le(en_upper(10, g), 1018.5)]))


def _certificates(s: _Suite, nullspace_max: int):
    g = parse_alpha("golden")
    for n in (8, 13, 21):
        cert = certificate_explicit(n, g)
        again = verify_certificate(certificate_to_json(cert))
        s.row("certificates", "explicit above floor + re-verified", "golden", f"n={n}",
              all_verdicts([cert.extras["floor_verdict"], again.verdict]),
              f"ln ratio >= {_floor_text(cert.lower_bound)}")
    for n in range(1, nullspace_max + 1):
        cert = certificate_nullspace(n, g)
        again = verify_certificate(certificate_to_json(cert))
        s.row("certificates", "null-space vanishing + consistency + re-verified", "golden",
              f"n={n}", all_verdicts([cert.extras["vanishing"], cert.extras["consistent"],
                                      again.verdict]),
              f"ln ratio >= {_floor_text(cert.lower_bound)}")


def _machinery(s: _Suite):
    g = parse_alpha("golden")
    s.row("machinery", "node vanishing", "golden", "n<=5, all (l,m)",
          all_verdicts(node_vanishing(n, l, m, g)["verdict"]
                       for n in range(1, 6) for l, m in simplex(n)))
    s.row("machinery", "beta chain bound", "golden", "n=8, all (l,m)",
          all_verdicts(beta_product(8, l, m, g).chain_verdict for l, m in simplex(8)))
    coeff, interp = [], []
    for seed in range(50):
        P = BivarPoly.random(1 + seed % 6, seed)
        coeff.append(coeff_bound_check(P, g)["verdict"])
        if P.n <= 3:
            interp.extend(interpolation_identity_check(P, l, m, g)["verdict"]
                          for l, m in simplex(P.n))
    s.row("machinery", "coefficient bound", "golden", "50 seeded P, n<=6", all_verdicts(coeff))
    s.row("machinery", "interpolation identity", "golden", "seeded P with n<=3",
          all_verdicts(interp))


def _corollaries(s: _Suite, depth: int):
    for name in ("golden", "sqrt2m1"):
        a = parse_alpha(name)
        s.row("corollaries", "Diophantine lower bound", name, "n<=100",
              all_verdicts(corollary_dio_check(n, a)["verdict"] for n in range(1, 101)))
    g = parse_alpha("golden")
    endio = corollary_endio_check(g, 2, depth, 100)
    s.row("corollaries", "growth with Diophantine constant", "golden",
          f"mu=2, S={depth}, n<=100", endio["verdict"], f"C in {ball_text(endio['C'], 8)}")
    enreg = enreg_diagnostic(g, depth, 200)
    s.row("corollaries", "enreg consistency at n=q_s", "golden", f"s<={enreg.horizon}",
          enreg.consistency_verdict)
    s.row("corollaries", "enreg growth (C+10) n^2 ln n", "golden", "3<=n<=200",
          enreg.growth_verdict(3),
          "n=2 is excluded: the bound fails there, see the decisions ledger")


def _smember(s: _Suite):
    a = make_s_member([0, 2])
    rows = convergent_table(a, 2)
    s.row("S-construction", "q_2 = 33", "smember[0;2]", "s=2",
          Verdict.TRUE if rows[2].q == 33 else Verdict.FALSE)
    s.row("S-construction", "a_3 = 2^10987", "smember[0;2]", "s=3",
          Verdict.TRUE if smember_exponent(2, 33) == 10987 else Verdict.FALSE)
    prof = diophantine_profile(a, 3)
    ln_q3 = prof.rows[1].ln_q_s1  # row s=2 carries ln q_3
    s.row("S-construction", "ln q_3 in [7619.1,7619.3]", "smember[0;2]", "s=3",
          all_verdicts([le(7619.1, ln_q3), le(ln_q3, 7619.3)]))
    s.row("S-construction", "S-score strictly increasing", "smember[0;2]", "s=1..3",
          prof.strictly_increasing_scores())
    depth_s, v = logonly_cross_check(a, 4)
    s.row("S-construction", "LogOnly vs exact", "smember[0;2]", f"s={depth_s}", v)


def _sets(s: _Suite):
    term = hausdorff_term(HFunction(2), 10)
    s.row("sets", "Hausdorff term n=10 p=2", "-", "1.514e-2 +- 1e-4",
          all_verdicts([le(0.01504, term), le(term, 0.01524)]))
    pot = polar_potential(1j, EpsilonSeq("power", 3), 10_000)
    s.row("sets", "potential at i nonincreasing and >= -1.8074", "-", "M<=10000",
          all_verdicts([pot.nonincreasing, pot.above_lower_bound, le(-1.8074, pot.value)]))
    s.row("sets", "remark sequence (k ln 2)/2 - 1", "-", "k<=20",
          all_verdicts(r[3] for r in remark_rows(20)))


def run_suite(alpha_list: str = "default", depth: int = 25, nullspace_max: int = 8) -> Report:
    config = {"alpha_list": alpha_list, "depth": depth, "nullspace_max": nullspace_max}
    report = Report("verify", config, COLUMNS)
    s = _Suite(report)
    alphas = _alphas(alpha_list)
    _cf(s, alphas, max(depth, 30))
    _lemmas(s, alphas)
    _theorem(s, alphas)
    _certificates(s, nullspace_max)
    _machinery(s)
    _corollaries(s, depth)
    _smember(s)
    _sets(s)
    return report
