import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from chronofrac.cli import grid_points, ingest_csv, main
from chronofrac.errors import DuplicateTimestampConflict, ParseError
from chronofrac.timescale import parse_scale


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return json.loads(text)["rows"]


def test_deriv_examples():
    code, out, _ = run("deriv", "--scale", "Z", "--fn", "t^2", "--order", "1/2", "--at", "4")
    assert code == 0
    assert rows(out) == [{"t": 4, "value": 9, "method": "ClosedFormScattered", "error_estimate": 0, "error": None}]

    code, out, _ = run("deriv", "--scale", "hZ:1", "--fn", "t^2", "--order", "1.3", "--at", "5")
    assert code == 0 and rows(out)[0]["value"] == 2

    code, out, _ = run("deriv", "--scale", "R", "--fn", "7", "--order", "1/3", "--at", "0")
    (row,) = rows(out)
    assert code == 0 and row["value"] == 0 and row["method"] == "TwoSidedLimit"
    assert row["error_estimate"] <= 1e-9


def test_integ_examples():
    for order in ("1/2", "0.25"):
        code, out, _ = run("integ", "--scale", "Z", "--fn", "t", "--order", order, "--from", "1", "--to", "10")
        assert code == 0 and rows(out)[0]["value"] == 9
    code, out, _ = run("integ", "--scale", "Z", "--fn", "t", "--order", "1/2", "--from", "3", "--to", "3")
    assert rows(out)[0]["value"] == 0


def test_chain_examples():
    code, out, _ = run("chain", "--scale", "Z", "--fn", "t^2", "--g", "2*t", "--order", "1/2", "--at", "4")
    assert code == 0 and rows(out)[0]["c"] == pytest.approx(4.5, abs=1e-9)
    code, out, _ = run("chain", "--scale", "Z", "--fn", "t^2", "--g", "5", "--order", "1/3", "--at", "4")
    assert rows(out)[0]["c"] == 4
    code, out, _ = run("chain", "--scale", "Z", "--fn", "t^3", "--gfn", "t", "--order", "1/2", "--at", "1")
    assert rows(out)[0]["c"] == pytest.approx((7 / 3) ** 0.5, abs=1e-9)


def test_info_examples():
    code, out, _ = run("info", "--scale", "cantor:3", "--at", "1/3")
    (row,) = rows(out)
    assert code == 0
    assert row["sigma_exact"] == "2/3" and row["mu_exact"] == "1/3"
    assert row["kind"] == "right_scattered"
    code, out, _ = run("info", "--scale", "Z", "--at", "0")
    assert rows(out)[0]["kind"] == "isolated"
    code, _, err = run("info", "--scale", "Z", "--at", "0.5")
    assert code == 2 and "PointNotInScale" in err


def test_laws_command():
    code, out, _ = run("laws", "--seed", "1", "--n", "5")
    assert code == 0
    assert all(r["passed"] for r in rows(out))
    code, _, _ = run("laws", "--n", "5", "--inject-fault")
    assert code == 1
    code, _, _ = run("laws", "--n", "0")
    assert code == 64


@pytest.mark.parametrize(
    "argv",
    [
        ("deriv", "--scale", "Q", "--fn", "t", "--order", "1/2", "--at", "1"),
        ("deriv", "--scale", "Z", "--fn", "t +", "--order", "1/2", "--at", "1"),
        ("deriv", "--scale", "Z", "--fn", "t", "--order", "x", "--at", "1"),
        ("deriv", "--scale", "Z", "--fn", "t", "--order", "1/2"),
        ("deriv", "--scale", "R", "--fn", "t", "--order", "1/2", "--grid", "3"),
        ("integ", "--scale", "Z", "--fn", "t", "--order", "3/2", "--from", "1", "--to", "2"),
        ("bogus",),
        (),
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 64


def test_evaluation_error_rows():
    code, out, _ = run("deriv", "--scale", "union:{[0,1],{2}}", "--fn", "t", "--order", "1/2", "--at", "2")
    assert code == 2
    code, out, _ = run("deriv", "--scale", "Z", "--fn", "1/t", "--order", "1/2", "--grid", "3", "--window=-2,2")
    assert code == 2
    methods = [r["method"] for r in rows(out)]
    assert methods.count("error") == 2  # t = -1 and t = 0 touch the pole
    assert len(methods) == 5


def test_grid_points():
    T = parse_scale("union:{[0,1],{3/2},[2,3]}")
    assert grid_points(T, (0, 3), 3) == [0, F(1, 2), 1, F(3, 2), 2, F(5, 2), 3]
    assert grid_points(parse_scale("Z"), (F(-1, 2), 2), 5) == [0, 1, 2]


def test_csv_and_json_agree():
    base = ("deriv", "--scale", "hZ:1/3", "--fn", "sin(t)", "--order", "2/3", "--grid", "1", "--window", "0,2")
    _, js, _ = run(*base)
    _, cs, _ = run(*base, "--format", "csv")
    lines = cs.strip().splitlines()
    assert lines[0] == "t,value,method,error_estimate,error"
    for row, line in zip(rows(js), lines[1:]):
        t, value, *_ = line.split(",")
        assert float(t) == row["t"] and float(value) == row["value"]


def test_output_is_deterministic():
    argv = ("deriv", "--scale", "R", "--fn", "exp(t)", "--order", "1/3", "--grid", "4", "--window", "0,1")
    assert run(*argv)[1] == run(*argv)[1]


def test_env_tolerance(monkeypatch):
    argv = ("deriv", "--scale", "R", "--fn", "exp(t)", "--order", "1", "--at", "0")
    strict = rows(run(*argv)[1])[0]
    monkeypatch.setenv("CHRONOFRAC_TOL", "1e-4")
    loose = rows(run(*argv)[1])[0]
    assert loose["value"] == pytest.approx(1, abs=1e-4)
    assert strict["value"] == pytest.approx(1, abs=1e-9)


def test_ingest_csv(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("t,value\n0,1\n0.5,2\n1.7,4\n0.5,2\n")
    T, f = ingest_csv(str(p))
    assert T.mu(0) == F(1, 2) and T.mu(F(1, 2)) == F(6, 5)
    assert f(F(17, 10)) == 4
    p.write_text("1,5\n1,6\n")
    with pytest.raises(DuplicateTimestampConflict):
        ingest_csv(str(p))
    p.write_text("")
    with pytest.raises(ParseError):
        ingest_csv(str(p))
    p.write_text("0,1\n1,oops\n")
    with pytest.raises(ParseError) as info:
        ingest_csv(str(p))
    assert info.value.line == 2


def test_deriv_from_csv(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("0,1\n0.5,2\n1.7,4\n")
    code, out, _ = run("deriv", "--csv", str(p), "--order", "1", "--grid", "1")
    assert code == 0
    assert [r["t"] for r in rows(out)] == [0, 0.5]  # 1.7 is a left-scattered maximum
    assert rows(out)[1]["value"] == pytest.approx(2 / 1.2, rel=1e-15)
    assert run("deriv", "--csv", str(p), "--scale", "Z", "--order", "1", "--at", "0")[0] == 64
    assert run("deriv", "--csv", str(tmp_path / "missing.csv"), "--order", "1", "--at", "0")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chronofrac", "info", "--scale", "Z", "--at", "4", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("4.0,5.0,3.0,1.0,isolated")
