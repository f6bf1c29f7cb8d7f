import csv
import io
import json

import pytest

from expcurve.cli import parse_range, parse_zeta, run_command
from expcurve.errors import InvalidSpec
from fractions import Fraction


def run(capsysbinary, *argv):
    code = run_command(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out.decode(), out.err.decode()


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("1..3,7") == [1, 2, 3, 7]
    for bad in ("", "4..1", "a", "1..x"):
        with pytest.raises(InvalidSpec):
            parse_range(bad)


def test_parse_zeta():
    assert parse_zeta("i") == (0, 1)
    assert parse_zeta("0.1i") == (0, Fraction(1, 10))
    assert parse_zeta("1/3-2i") == (Fraction(1, 3), -2)
    with pytest.raises(InvalidSpec):
        parse_zeta("1i2")


def test_cf_csv(capsysbinary):
    code, out, _ = run(capsysbinary, "cf", "--alpha", "golden", "--depth", "6", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["q_s"]) for r in rows] == [1, 1, 2, 3, 5, 8, 13]
    assert all(r["psqs_bounds"] == "TRUE" for r in rows)
    assert "\r" not in out


def test_cf_json_schema(capsysbinary):
    code, out, _ = run(capsysbinary, "cf", "--alpha", "periodic:[0;|1,2]", "--depth", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "expcurve/report/1"
    assert doc["summary"]["overall"] == "TRUE"
    # balls are intervals, never bare midpoints
    assert doc["rows"][2]["ln_q_s"].startswith("[")


def test_bounds_rows(capsysbinary):
    code, out, _ = run(capsysbinary, "bounds", "--alpha", "golden", "--n", "1..64", "--format",
                       "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 64
    assert rows[9]["en_lower"].startswith("[15.129")
    assert rows[0]["certificate_method"] == "explicit"


def test_dalpha_and_profile(capsysbinary):
    assert run(capsysbinary, "dalpha", "--alpha", "sqrt2m1", "--n", "1..50")[0] == 0
    code, out, _ = run(capsysbinary, "profile", "--alpha", "rule:smember:prefix=[0;2]",
                       "--depth", "3")
    assert code == 0
    assert "strictly increasing over the horizon: TRUE" in out


def test_certify_verify_round_trip(tmp_path, capsysbinary):
    cert = tmp_path / "c.json"
    code, _, _ = run(capsysbinary, "certify", "--alpha", "golden", "--n", "4", "--method",
                     "nullspace", "--output", str(cert))
    assert code == 0
    code, out, _ = run(capsysbinary, "verify", "--cert", str(cert), "--format", "csv")
    assert code == 0
    assert "reproduced,TRUE" in out and "vanishing,TRUE" in out
    doc = json.loads(cert.read_text())
    doc["ln_ratio_lower"] = ["999", "1000"]
    cert.write_text(json.dumps(doc))
    code, out, _ = run(capsysbinary, "verify", "--cert", str(cert), "--format", "csv")
    assert code == 1
    assert "reproduced,FALSE" in out


def test_certify_to_stdout(capsysbinary):
    code, out, _ = run(capsysbinary, "certify", "--alpha", "golden", "--n", "8")
    assert code == 0
    assert json.loads(out)["method"] == "explicit"


def test_exit_code_false(capsysbinary):
    # the growth inequality fails at n = 2 for golden
    code, out, _ = run(capsysbinary, "sets", "--what", "enreg", "--alpha", "golden", "--n",
                       "2..5", "--depth", "25", "--format", "csv")
    assert code == 1
    assert "growth,2," in out and "FALSE" in out
    code, _, _ = run(capsysbinary, "sets", "--what", "enreg", "--alpha", "golden", "--n",
                     "2..5", "--n-from", "3")
    assert code == 0


def test_exit_code_undecided(capsysbinary):
    # p_s, q_s beyond the digit cap stay LogOnly
    code, _, err = run(capsysbinary, "cf", "--alpha", "rule:smember:prefix=[0;2]",
                       "--depth", "5")
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize("argv", [
    ["cf", "--alpha", "bogus"],
    ["cf"],
    ["nosuchcommand"],
    [],
    ["sets", "--what", "hausdorff", "--N", "2"],
    ["verify"],
    ["verify", "--cert", "/nonexistent/file.json"],
    ["potential", "--zeta", "2i"],
    ["bounds", "--alpha", "golden", "--n", "5..1"],
])
def test_exit_code_invalid(capsysbinary, argv):
    assert run(capsysbinary, *argv)[0] == 3


def test_sets_commands(capsysbinary):
    code, out, _ = run(capsysbinary, "sets", "--what", "score", "--alpha",
                       "rule:smember:prefix=[0;2]", "--depth", "3", "--threshold", "2.5")
    assert code == 0
    assert "exceeded threshold 2.5 at 3" in out
    assert run(capsysbinary, "sets", "--what", "remark", "--k", "20")[0] == 0
    assert run(capsysbinary, "sets", "--what", "hausdorff", "--M", "500")[0] == 0
    assert run(capsysbinary, "sets", "--what", "cover", "--alpha", "golden", "--n", "1..5")[0] == 0
    assert run(capsysbinary, "sets", "--what", "t", "--alpha", "golden",
               "--eps", "scaled_inverse:one")[0] == 0
    assert run(capsysbinary, "sets", "--what", "u", "--alpha", "golden", "--n", "2..10")[0] == 0


def test_potential(capsysbinary):
    code, out, _ = run(capsysbinary, "potential", "--zeta", "i", "--M", "1000", "--format", "csv")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["nonincreasing"] == "TRUE" and row["above_lower_bound"] == "TRUE"
    code, out, _ = run(capsysbinary, "potential", "--zeta", "1/2", "--M", "3", "--format", "csv")
    assert code == 0
    assert next(csv.DictReader(io.StringIO(out)))["minus_infinity"] == "true"


def test_output_file_matches_stdout(tmp_path, capsysbinary):
    path = tmp_path / "r.json"
    run(capsysbinary, "dalpha", "--alpha", "golden", "--n", "1..20", "--output", str(path))
    _, out, _ = run(capsysbinary, "dalpha", "--alpha", "golden", "--n", "1..20")
    assert path.read_text() == out
