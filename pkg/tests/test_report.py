import json

from flint import arb

from expcurve import Verdict
from expcurve.balls import interval_strings, working_precision
from expcurve.report import Report, ball_text, cell, emit_report, to_csv, to_json


def make():
    r = Report("demo", {"alpha": "golden", "n": 3}, ("n", "value", "verdict"))
    r.add({"n": 1, "value": arb(2).log(), "verdict": Verdict.TRUE}, Verdict.TRUE)
    r.add({"n": 2, "value": None, "verdict": Verdict.UNDECIDED}, Verdict.UNDECIDED)
    return r


def test_ball_text_encloses():
    with working_precision(200):
        x = arb(2).log()
        lo_s, hi_s = interval_strings(x, 20)
        assert arb(lo_s) <= x <= arb(hi_s)
    assert ball_text(arb(1)) == "[1,1]"


def test_cell_values():
    assert cell(2**60) == str(2**60)
    assert cell(5) == 5
    assert cell(Verdict.FALSE) == "FALSE"
    assert cell(None) is None


def test_json_and_exit_code():
    r = make()
    doc = json.loads(to_json(r))
    assert doc["schema"] == "expcurve/report/1"
    assert doc["summary"]["counts"] == {"TRUE": 1, "FALSE": 0, "UNDECIDED": 1}
    assert r.exit_code() == 2
    r.add({"n": 3}, Verdict.FALSE)
    assert r.exit_code() == 1
    assert Report("x", {}, ()).exit_code() == 0


def test_csv_and_bytes(tmp_path):
    r = make()
    text = to_csv(r)
    assert text.splitlines()[0] == "n,value,verdict"
    assert text.splitlines()[2] == "2,,UNDECIDED"
    path = tmp_path / "r.csv"
    assert emit_report(r, "csv", path) == len(path.read_bytes())
    assert to_json(make()) == to_json(make())
