import csv
import io
import json

import pytest
from click.testing import CliRunner

from qcohlab.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def ok_json(*args):
    res = run(*args)
    assert res.exit_code == 0, res.output
    return json.loads(res.output)


def test_cohomology_single_twist():
    out = ok_json("cohomology", "--n", "2", "--twist", "-3")
    assert out["h"] == [0, 0, 1] and out["stabilized"]


def test_cohomology_table_json_and_csv_agree():
    js = ok_json("cohomology", "--n", "1", "--degree-range", "-3..2")
    res = run("cohomology", "--n", "1", "--degree-range", "-3..2", "--format", "csv")
    assert res.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert [[int(r["h0"]), int(r["h1"])] for r in rows] == [r["h"] for r in js["rows"]]


def test_cohomology_from_file(tmp_path):
    path = tmp_path / "line.json"
    path.write_text(json.dumps({
        "n": 2, "targets": [0], "sources": [-1], "matrix": [[[[1, [0, 0, 1]]]]],
    }))
    out = ok_json("cohomology", "--sheaf", str(path))
    assert out["h"] == [1, 0, 0]


def test_ext_twists():
    out = ok_json("ext-twists", "--n", "3", "--source", "0", "--target", "-4")
    assert out["ext"] == [0, 0, 0, 1]


def test_decompose_and_adjunction():
    out = ok_json("decompose", "--n", "1", "--twist", "0")
    assert out["exact"] and out["strict"]
    out = ok_json("adjunction-check", "--n", "1", "--vertex", "0", "--twist", "0")
    assert out["ok"] and out["tested"] > 0


def test_tate_both_sides():
    out = ok_json("tate", "--ring", "GF:2:x^2", "--module", "k", "--against", "k", "--range", "-2..2")
    assert [r["dim"] for r in out["rows"]] == [1] * 5


def test_am_check_and_report():
    out = ok_json("am-check", "--ring", "Zmod:4", "--module", "k", "--against", "R", "--degree", "3")
    assert out["exact"]
    out = ok_json("gorenstein-report", "--ring", "Zmod:2")
    assert set(out["predicates"]["conditions"].values()) == {True}


def test_deterministic_output():
    a = run("adjunction-check", "--n", "2", "--vertex", "0,1", "--twist", "1", "--seed", "3")
    b = run("adjunction-check", "--n", "2", "--vertex", "0,1", "--twist", "1", "--seed", "3")
    assert a.output == b.output


@pytest.mark.parametrize("args", [
    ["cohomology", "--n", "1"],
    ["cohomology", "--n", "1", "--twist", "0", "--field", "F4"],
    ["cohomology", "--n", "1", "--degree-range", "3..1"],
    ["tate", "--ring", "Trunc:2:2:2", "--module", "k", "--against", "k"],
    ["tate", "--ring", "Zmod:4", "--module", "pres:x", "--against", "k"],
    ["am-check", "--ring", "Zmod:4"],
    ["adjunction-check", "--n", "1", "--vertex", "5", "--twist", "0"],
    ["cohomology", "--sheaf", "/nonexistent/file.json"],
])
def test_input_errors_exit_2(args):
    res = run(*args)
    assert res.exit_code == 2, res.output


def test_certificate_failure_exits_1(tmp_path):
    # three points on P^1 from a binomial: window 1 is too small to stabilize
    path = tmp_path / "points.json"
    path.write_text(json.dumps({
        "n": 1, "targets": [0], "sources": [-3], "matrix": [[[[1, [3, 0]], [1, [0, 3]]]]],
    }))
    res = run("cohomology", "--sheaf", str(path), "--window", "1")
    assert res.exit_code == 1
    assert "window" in res.output
    out = ok_json("cohomology", "--sheaf", str(path), "--window", "3")
    assert out["h"] == [3, 0] and out["stabilized"]
    assert run("cohomology", "--sheaf", str(path), "--window", "1", "--no-check").exit_code == 0
