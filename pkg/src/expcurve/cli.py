"""Command line front end.

Exit codes: 0 every verdict TRUE, 1 some verdict FALSE, 2 UNDECIDED or a
precision/digit cap was hit, 3 invalid input.
"""

from __future__ import annotations

import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import click

from .alpha_gen import diophantine_profile
from .balls import Verdict, all_verdicts, le
from .cf_core import convergent_table, determinant_identity_check, parse_alpha, psqs_bounds_check
from .errors import (
    CapExceeded, DomainError, InvalidSpec, ListTooShort, PrecisionExhausted,
    RankDeficiencyUnresolved,
)
from .report import Report, emit_report

EXIT_OK, EXIT_FALSE, EXIT_UNDECIDED, EXIT_INVALID = 0, 1, 2, 3


def parse_range(text: str) -> list[int]:
    """"1..64", "10", "1,2,5" or mixtures like "1..5,10"."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo_, hi_ = int(m.group(1)), int(m.group(2))
            if lo_ > hi_:
                raise InvalidSpec(f"empty range {part!r}")
            out.extend(range(lo_, hi_ + 1))
        elif re.fullmatch(r"\d+", part):
            out.append(int(part))
        else:
            raise InvalidSpec(f"bad range {text!r}")
    if not out:
        raise InvalidSpec("range is empty")
    return out


_NUM = r"\d+(?:\.\d*)?(?:/\d+)?"
_COMPLEX = re.compile(rf"(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?(?P<unit>[ij]))?")


def parse_zeta(text: str) -> tuple[Fraction, Fraction]:
    """"re,im", "a+bi", "0.5i", "i", "0.5"; components are exact decimals or fractions."""
    t = text.replace(" ", "")
    try:
        if "," in t:
            re_s, im_s = t.split(",", 1)
            return Fraction(re_s), Fraction(im_s)
        m = _COMPLEX.fullmatch(t)
        if not t or not m:
            raise ValueError(text)
        re_s, sign, im_s, unit = m.group("re", "sign", "im", "unit")
        if unit and sign is None and re_s is not None and im_s is None:
            # "0.5i": the number in front is the imaginary part
            re_s, im_s = None, re_s
        if unit and re_s is not None and sign is None:
            raise ValueError(text)
        real = Fraction(re_s) if re_s else Fraction(0)
        imag = Fraction(0)
        if unit:
            imag = Fraction(im_s) if im_s else Fraction(1)
            if sign == "-":
                imag = -imag
        return real, imag
    except (ValueError, ZeroDivisionError):
        raise InvalidSpec(f"bad complex number {text!r}") from None


def _alpha(text: str):
    return parse_alpha(text)


def _out(report: Report, fmt: str, output: str | None) -> int:
    emit_report(report, fmt, output)
    return report.exit_code()


format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                             default="json", show_default=True)
output_option = click.option("--output", "-o", default=None,
                             help="Output file (default: standard output).")
alpha_option = click.option("--alpha", "alpha_text", required=True,
                            help='Alpha spec, e.g. "periodic:[0;|1]" or "golden".')


@click.group()
@click.option("--prec-cap", type=int, default=None,
              help="Precision cap in bits (also EXPCURVE_PREC_CAP).")
@click.version_option(package_name="artifact", prog_name="expcurve")
def cli(prec_cap):
    """Certified computations for the transcendence measure of (e^z, e^{alpha z})."""
    if prec_cap is not None:
        if prec_cap < 64:
            raise InvalidSpec("--prec-cap must be >= 64")
        os.environ["EXPCURVE_PREC_CAP"] = str(prec_cap)


@cli.command()
@alpha_option
@click.option("--depth", type=int, default=20, show_default=True)
@format_option
@output_option
def cf(alpha_text, depth, fmt, output):
    """Convergent table with the determinant identity and the p_s/q_s error bounds."""
    if depth < 0:
        raise InvalidSpec("--depth must be >= 0")
    a = _alpha(alpha_text)
    from .cf_core import ln_magnitude

    rows = convergent_table(a, depth + 1)
    report = Report("cf", {"alpha": str(a), "depth": depth},
                    ("s", "a_s", "p_s", "q_s", "ln_q_s", "psqs_bounds"))
    report.verdicts.append(determinant_identity_check(a, depth))
    for row in rows[: depth + 1]:
        v = psqs_bounds_check(row.s, a)
        report.add({"s": row.s, "a_s": row.a, "p_s": row.p, "q_s": row.q,
                    "ln_q_s": ln_magnitude(row.q), "psqs_bounds": v}, v)
    return _out(report, fmt, output)


@cli.command()
@alpha_option
@click.option("--depth", type=int, default=10, show_default=True)
@click.option("--mu", type=float, default=None)
@format_option
@output_option
def profile(alpha_text, depth, mu, fmt, output):
    """Diophantine profile: ln q_s, exponents, Liouville ratios and S-scores."""
    a = _alpha(alpha_text)
    prof = diophantine_profile(a, depth, mu)
    columns = ("s", "ln_q_s", "ln_q_s1", "mu_s", "liouville_ratio", "s_score", "ln_C_s")
    report = Report("profile", {"alpha": str(a), "depth": depth, "mu": mu}, columns)
    for r in prof.rows:
        report.add({c: getattr(r, c) for c in columns})
    report.notes.append(f"S-score strictly increasing over the horizon: "
                        f"{prof.strictly_increasing_scores().value}")
    return _out(report, fmt, output)


@cli.command()
@alpha_option
@click.option("--n", "n_text", default="1..100", show_default=True)
@format_option
@output_option
def dalpha(alpha_text, n_text, fmt, output):
    """ln D_alpha(n) against its lower bound, with the partition side conditions."""
    from .dalpha_bounds import lemma_dalpha_check

    a = _alpha(alpha_text)
    report = Report("dalpha", {"alpha": str(a), "n": n_text},
                    ("n", "ln_D", "ln_lower_bound", "verdict"))
    for n in parse_range(n_text):
        r = lemma_dalpha_check(n, a)
        report.add({"n": n, "ln_D": r.ln_lhs, "ln_lower_bound": r.ln_rhs_bound,
                    "verdict": r.verdict}, r.verdict)
    return _out(report, fmt, output)


@cli.command()
@alpha_option
@click.option("--n", "n_text", default="1..64", show_default=True)
@click.option("--certificates/--no-certificates", default=True, show_default=True,
              help="Also build the explicit witness for each n.")
@format_option
@output_option
def bounds(alpha_text, n_text, certificates, fmt, output):
    """Two-sided bounds on e_n(alpha) and the best certified lower bound."""
    from .transcendence.bounds import bounds_table

    a = _alpha(alpha_text)
    table = bounds_table(a, parse_range(n_text), certificates=certificates)
    report = Report("bounds", {"alpha": str(a), "n": n_text, "certificates": certificates},
                    ("n", "s", "en_lower", "en_upper", "best_certificate",
                     "certificate_method", "verdict"))
    for r in table.rows:
        report.add({"n": r.n, "s": r.s, "en_lower": r.en_lower, "en_upper": r.en_upper,
                    "best_certificate": r.best_certificate,
                    "certificate_method": r.certificate_method, "verdict": r.sandwich},
                   r.sandwich)
    return _out(report, fmt, output)


@cli.command()
@alpha_option
@click.option("--n", "n", type=int, required=True)
@click.option("--method", type=click.Choice(["explicit", "nullspace", "l2_candidate"]),
              default="explicit", show_default=True)
@click.option("--precision", type=int, default=512, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@output_option
def certify(alpha_text, n, method, precision, seed, output):
    """Build a certificate and write it as JSON."""
    from .transcendence import certificates as C

    if precision < 64:
        raise InvalidSpec("--precision must be >= 64")
    a = _alpha(alpha_text)
    if method == "explicit":
        cert = C.certificate_explicit(n, a, precision)
        checks = [cert.extras["floor_verdict"]]
    elif method == "nullspace":
        cert = C.certificate_nullspace(n, a, precision)
        checks = [cert.extras["vanishing"], cert.extras["consistent"]]
    else:
        cert = C.l2_candidate(n, a, precision, seed=seed)
        checks = [cert.extras["consistent"]]
    text = C.certificate_to_json(cert)
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    verdict = all_verdicts(checks)
    return {Verdict.TRUE: EXIT_OK, Verdict.FALSE: EXIT_FALSE}.get(verdict, EXIT_UNDECIDED)


@cli.command()
@click.option("--cert", "cert_path", default=None, type=click.Path(dir_okay=False))
@click.option("--suite", type=click.Choice(["all"]), default=None)
@click.option("--alpha-list", default="default", show_default=True)
@click.option("--depth", type=int, default=25, show_default=True)
@format_option
@output_option
def verify(cert_path, suite, alpha_list, depth, fmt, output):
    """Re-check a serialized certificate, or run the full verification suite."""
    if (cert_path is None) == (suite is None):
        raise click.UsageError("give exactly one of --cert and --suite")
    if suite:
        from .suite import run_suite

        return _out(run_suite(alpha_list, depth), fmt, output)
    from .transcendence.certificates import verify_certificate

    try:
        doc = json.loads(Path(cert_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSpec(f"cannot read certificate: {exc}") from None
    try:
        result = verify_certificate(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidSpec):
            raise
        raise InvalidSpec(f"malformed certificate: {exc}") from None
    report = Report("verify", {"cert": Path(cert_path).name}, ("check", "verdict"))
    for name, v in result.checks.items():
        report.add({"check": name, "verdict": v}, v)
    if result.recomputed_ln_ratio is not None:
        report.add({"check": "recomputed_ln_ratio", "verdict": result.recomputed_ln_ratio})
    return _out(report, fmt, output)


@cli.command()
@click.option("--what", type=click.Choice(["score", "t", "u", "enreg", "hausdorff", "cover",
                                           "remark"]), default="score", show_default=True)
@click.option("--alpha", "alpha_text", default=None)
@click.option("--depth", type=int, default=10, show_default=True)
@click.option("--eps", "eps_text", default="power:3", show_default=True)
@click.option("--threshold", type=float, default=None)
@click.option("--n", "n_text", default="2..50", show_default=True)
@click.option("--n-from", type=int, default=2, show_default=True,
              help="First n of the enreg growth check.")
@click.option("--p", "p", type=float, default=2.0, show_default=True)
@click.option("--N", "N", type=int, default=3, show_default=True)
@click.option("--M", "M", type=int, default=10_000, show_default=True)
@click.option("--which", type=click.Choice(["A", "A'"]), default="A", show_default=True)
@click.option("--k", "k_max", type=int, default=20, show_default=True)
@format_option
@output_option
def sets(what, alpha_text, depth, eps_text, threshold, n_text, n_from, p, N, M, which,
         k_max, fmt, output):
    """Finite-horizon diagnostics for the exceptional sets."""
    from . import exceptional_sets as X

    needs_alpha = what in ("score", "t", "u", "enreg", "cover")
    if needs_alpha and alpha_text is None:
        raise click.UsageError(f"--what {what} needs --alpha")
    a = _alpha(alpha_text) if alpha_text else None
    config = {"what": what, "alpha": str(a) if a else None}
    if what in ("score", "t"):
        config.update(depth=depth, threshold=threshold)
        if what == "score":
            traj = X.s_score_trajectory(a, depth, threshold)
        else:
            config["eps"] = eps_text
            traj = X.t_trajectory(a, X.EpsilonSeq.parse(eps_text), depth, threshold)
        report = Report("sets", config, ("s", "value"))
        for s, v in traj.rows:
            report.add({"s": s, "value": v})
        report.notes.append(traj.message())
    elif what == "u":
        config.update(eps=eps_text, n=n_text)
        report = Report("sets", config, ("n", "lower", "upper"))
        for n, lo_, hi_ in X.u_rows(a, X.EpsilonSeq.parse(eps_text), parse_range(n_text)):
            report.add({"n": n, "lower": lo_, "upper": hi_})
    elif what == "enreg":
        config.update(depth=depth, n_max=max(parse_range(n_text)), n_from=n_from)
        rep = X.enreg_diagnostic(a, depth, max(parse_range(n_text)))
        report = Report("sets", config, ("kind", "index", "lhs", "rhs", "verdict"))
        report.notes.append(f"C = horizon max of the S-score = "
                            f"{'none' if rep.C is None else rep.C.mid().str(10)}")
        for what_, why in rep.skipped:
            report.notes.append(f"skipped {what_}: {why}")
        for s, q, v in rep.consistency:
            report.add({"kind": "consistency", "index": s, "lhs": q, "rhs": None,
                        "verdict": v}, v)
        for n, up, rhs, v in rep.growth:
            if n >= n_from:
                report.add({"kind": "growth", "index": n, "lhs": up, "rhs": rhs,
                            "verdict": v}, v)
    elif what == "hausdorff":
        config.update(p=p, N=N, M=M)
        rep = X.hausdorff_tail(X.HFunction(p), N, M)
        report = Report("sets", config, ("block_start", "block_end", "block_sum"))
        for lo_, hi_, b in rep.blocks:
            report.add({"block_start": lo_, "block_end": hi_, "block_sum": b})
        report.notes.append(f"partial sum {rep.partial_sum.mid().str(12)}")
        report.notes.append(f"tail bound {rep.tail_bound.mid().str(6)}")
        report.notes.append(f"decreasing full decades: {rep.decreasing_blocks}")
    elif what == "cover":
        config.update(n=n_text, which=which)
        report = Report("sets", config, ("n", "member", "m"))
        for n in parse_range(n_text):
            v, m = X.cover_membership(a, n, which)
            report.add({"n": n, "member": v, "m": m})
    else:
        config.update(k=k_max)
        report = Report("sets", config, ("k", "value", "formula", "verdict"))
        for k, value, formula, v in X.remark_rows(k_max):
            report.add({"k": k, "value": value, "formula": formula, "verdict": v}, v)
    return _out(report, fmt, output)


@cli.command()
@click.option("--zeta", "zeta_text", default="i", show_default=True)
@click.option("--eps", "eps_text", default="power:3", show_default=True)
@click.option("--M", "M", type=int, default=1000, show_default=True)
@format_option
@output_option
def potential(zeta_text, eps_text, M, fmt, output):
    """Partial sum v_M(zeta) of the potential and its lower bound."""
    from .exceptional_sets import EpsilonSeq, lower_bound_applies, polar_potential

    zeta = parse_zeta(zeta_text)
    rep = polar_potential(zeta, EpsilonSeq.parse(eps_text), M)
    report = Report("potential", {"zeta": [str(zeta[0]), str(zeta[1])], "eps": eps_text, "M": M},
                    ("M", "value", "lower_bound", "bound_applies", "minus_infinity", "node",
                     "nonincreasing", "above_lower_bound"))
    applies = lower_bound_applies(zeta)
    report.add({"M": M, "value": "-inf" if rep.minus_infinity else rep.value,
                "lower_bound": rep.lower_bound, "bound_applies": applies,
                "minus_infinity": rep.minus_infinity,
                "node": None if rep.node is None else f"{rep.node[0]}/{rep.node[1]}",
                "nonincreasing": rep.nonincreasing,
                "above_lower_bound": rep.above_lower_bound})
    report.verdicts.append(rep.nonincreasing)
    if applies and not rep.minus_infinity:
        report.verdicts.append(rep.above_lower_bound)
    elif not applies:
        report.notes.append("some node m/n lies within distance 1 of zeta, so the lower "
                            "bound is not implied there and is reported only")
    return _out(report, fmt, output)


def run_command(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="expcurve", standalone_mode=False)
    except click.exceptions.NoArgsIsHelpError as exc:
        click.echo(exc.ctx.get_help(), err=True)
        return EXIT_INVALID
    except click.UsageError as exc:
        exc.show()
        return EXIT_INVALID
    except click.ClickException as exc:
        exc.show()
        return EXIT_INVALID
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return EXIT_INVALID
    except (InvalidSpec, DomainError) as exc:
        click.echo(f"error: invalid input: {exc}", err=True)
        return EXIT_INVALID
    except (PrecisionExhausted, CapExceeded, ListTooShort, RankDeficiencyUnresolved) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_UNDECIDED
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    return rv if isinstance(rv, int) else EXIT_OK


def main() -> None:
    sys.exit(run_command())
