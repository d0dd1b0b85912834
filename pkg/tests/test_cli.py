import io
import json
import math

import pytest

from octanorm.cli import run
from octanorm.specs import parse_norm


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_pos_oh_lp1():
    code, out, _ = call("check", "pos-oh", "--norm", "lp:1")
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["verdict"] is True
    assert rep["command"] == "check pos-oh"


def test_exact_delta():
    code, out, _ = call("rough", "exact-delta", "--p", "2", "--tol", "1e-3")
    assert code == 0
    res = json.loads(out)["results"]
    assert res["lower"] == pytest.approx(math.sqrt(2), abs=1e-3)
    assert res["upper"] == pytest.approx(1.4142136, abs=1e-7)


def test_window_compute():
    code, out, _ = call("window", "compute", "--a", "0.5", "--b", "0")
    assert code == 0
    (lo, hi, lc, hc), = json.loads(out)["results"]["window"]["feasible"]
    assert (lo, lc, hc) == (0.2, True, False) and hi == pytest.approx(1 / 3)


def test_parse_error_exit_two_without_output():
    code, out, err = call("norm", "eval", "--norm", "ab:0.5,0)", "--point", "1,1")
    assert code == 2 and out == ""
    assert "position 8" in err


def test_missing_argument_is_usage_error():
    code, out, _ = call("norm", "eval", "--norm", "lp:2")
    assert code == 2 and out == ""


def test_failed_verification_exit_one():
    code, out, _ = call("rough", "exact-delta", "--p", "2", "--budget", "1", "--tol", "1e-9")
    assert code == 1
    assert json.loads(out)["results"]["passed"] is False


def test_json_file_and_determinism(tmp_path):
    path = tmp_path / "r.json"
    args = ["rough", "search", "--space", "sum(lp:3; leaf:1; leaf:1)",
            "--points", '[[{"0":1},{}],[{},{"0":1}]]', "--budget", "200", "--seed", "4"]
    code, out1, _ = call(*args, "--json", str(path))
    assert code == 0 and path.read_text() == out1
    _, out2, _ = call(*args)
    assert out1 == out2


def test_no_partial_json_on_error(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = call("rough", "search", "--space", "leaf:1", "--points", '[{"0": 2}]',
                        "--json", str(path))
    assert code == 2 and out == "" and not path.exists()


def test_reported_norm_reparses():
    for spec in ("ab:0.3,0.6", "dual(poly:[(1,0),(2/3,1/2),(0,1)])", "lp:inf"):
        _, out, _ = call("norm", "gamma", "--norm", spec)
        echoed = json.loads(out)["inputs"]["norm"]
        assert parse_norm(echoed) == parse_norm(spec)


def test_csv_rows(tmp_path):
    path = tmp_path / "rows.csv"
    code, _, _ = call("slices", "min-diameter", "--norm", "lp:inf", "--k", "1", "--grid", "8",
                      "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "functionals,alpha,lambdas,diameter" and len(lines) > 8


@pytest.mark.parametrize(
    "argv",
    [
        ["norm", "eval", "--norm", "lp:2", "--point", "3,4"],
        ["norm", "dual", "--norm", "ab:0.5,0", "--functional", "1,0.5"],
        ["norm", "validate", "--norm", "dual(ab:0.5,0)", "--samples", "500"],
        ["norm", "modulus", "--norm", "ab:0.5,0", "--eps", "0.25"],
        ["check", "pos-sd2p", "--norm", "lp:2"],
        ["check", "duality", "--norm", "ab:0.5,0"],
        ["window", "verify", "--a", "0.5", "--b", "0", "--grid", "1000"],
        ["rough", "witness", "--space", "leaf:1", "--points", '[{"0":1}]', "--direction",
         '{"1":1}'],
        ["rough", "theorem-sum", "--space", "sum(lp:2; leaf:1; leaf:1)",
         "--points", '[[{"0":1},{}],[{},{"0":1}]]', "--budget", "200"],
        ["rough", "fbound", "--p", "2", "--eps", "0.1", "--samples", "200"],
        ["slices", "deville", "--norm", "lp:1", "--k", "1", "--grid", "16", "--budget", "50"],
    ],
)
def test_commands_succeed(argv):
    code, out, err = call(*argv)
    assert code == 0, err
    assert json.loads(out)["schema"] == "report_v1"


def test_timing_is_opt_in():
    _, out, _ = call("norm", "gamma", "--norm", "lp:2")
    assert json.loads(out)["timing_ms"] is None
    _, out, _ = call("norm", "gamma", "--norm", "lp:2", "--timing")
    assert json.loads(out)["timing_ms"] >= 0


def test_window_verify_csv(tmp_path):
    path = tmp_path / "w.csv"
    code, _, _ = call("window", "verify", "--pairs", "3", "--grid", "500", "--csv", str(path))
    lines = path.read_text().splitlines()
    assert code == 0
    assert lines[0] == "a,b,interior_mismatches,skipped_boundary"
    assert len(lines) == 4 and all(line.split(",")[2] == "0" for line in lines[1:])
