import json
import subprocess
import sys

import pytest
from conftest import FIXTURES, ROOT

from bclfactor.cli import main
from bclfactor.io import pointset_from_csv

FIX1 = str(FIXTURES / "fix1.json")


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_vn_fix1(capsys):
    code, out, _ = run(["vn", "--input", FIX1, "--poly", "z1*z2"], capsys)
    assert code == 0
    cert = json.loads(out)["artifacts"]["vn"][0]
    assert cert["lhs"] == pytest.approx(0.25)
    assert cert["rhs"] == pytest.approx(1.0, abs=1e-12)
    assert cert["pass"] is True


def test_check_fix1(capsys):
    code, out, _ = run(["check", "--input", FIX1], capsys)
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["residuals"]["rho_T"] == pytest.approx(0.25)
    assert report["artifacts"]["defect_ranks"] == {"T": 1, "T1": 1, "T2": 1}


def test_check_not_pure(capsys):
    code, out, _ = run(["check", "--input", str(FIXTURES / "nonpure.json")], capsys)
    report = json.loads(out)
    assert code == 2
    assert report["verdicts"]["pure_T"]["pass"] is False
    assert report["verdicts"]["pure_T"]["value"] == pytest.approx(1.0)


def test_dilate_non_commuting(capsys):
    code, out, err = run(["dilate", "--input", str(FIXTURES / "noncommuting.json")], capsys)
    assert code == 1 and out == ""
    assert "NotCommuting" in err


def test_all_non_commuting_stops_at_check(capsys):
    code, out, _ = run(["all", "--input", str(FIXTURES / "noncommuting.json")], capsys)
    report = json.loads(out)
    assert code == 2
    assert report["verdicts"]["commuting"]["pass"] is False
    assert "dilation" not in report["artifacts"]


@pytest.mark.parametrize("name", ["malformed.json", "ragged.json"])
def test_parse_errors(name, capsys):
    code, out, err = run(["all", "--input", str(FIXTURES / name)], capsys)
    assert code == 1 and out == "" and "ParseError" in err


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["vn", "--input", FIX1],
    ["dilate", "--input", FIX1, "--format", "csv"],
    ["check", "--tol", "-1"],
    ["vn", "--input", FIX1, "--poly", "z1 +"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        sys.exit(main(argv))
    assert info.value.code == 1


def test_variety_csv(tmp_path, capsys):
    out = tmp_path / "pts.csv"
    code, _, _ = run(["variety", "--input", FIX1, "--samples", "8", "--format", "csv",
                      "--out", str(out)], capsys)
    assert code == 0
    ps = pointset_from_csv(out.read_text())
    assert len(ps) == 16


def test_random_pair_without_input(capsys):
    code, out, _ = run(["factorize", "--dim", "3", "--seed", "4"], capsys)
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["config"]["seed"] == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bclfactor", "check", "--input", FIX1],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True
