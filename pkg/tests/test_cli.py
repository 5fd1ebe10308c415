import json
import subprocess
import sys
from pathlib import Path

import pytest

from covrecon.cli import main
from covrecon.poly import format_form

from golden_data import (GENUS4_CUBIC, GENUS4_OUT_CUBIC, GENUS4_OUT_QUADRIC, GENUS4_QUADRIC,
                         SYMMETRIC_QUADRIC, TERNARY_QUARTIC, TERNARY_X0_4,
                         symmetric_cubic)

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_JOBS = {
    "genus4_example.txt": ["reconstruct", "genus4", "--quadric", GENUS4_QUADRIC,
                           "--cubic", GENUS4_CUBIC, "--expect", GENUS4_OUT_QUADRIC,
                           "--expect", GENUS4_OUT_CUBIC, "--no-timings"],
    "genus3_example.txt": ["reconstruct", "genus3", "--form", TERNARY_QUARTIC, "--raw",
                           "--no-timings"],
}



def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def lines(out):
    return dict(line.split(": ", 1) for line in out.splitlines())


@pytest.mark.parametrize("name", sorted(GOLDEN_JOBS))
def test_golden_files(name, capsys):
    code, out = run(GOLDEN_JOBS[name], capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_golden_content():
    g4 = lines((GOLDEN / "genus4_example.txt").read_text())
    assert g4["verdict.status"] == "VERIFIED"
    assert g4["verdict.expect[0].proportional"] == "True"
    assert g4["verdict.expect[1].proportional"] == "True"
    g3 = lines((GOLDEN / "genus3_example.txt").read_text())
    assert g3["results.form"].startswith(f"{TERNARY_X0_4}*x0^4 ")


def test_byte_stable_across_processes():
    args = [sys.executable, "-m", "covrecon"] + GOLDEN_JOBS["genus4_example.txt"]
    a = subprocess.run(args, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, text=True, check=True).stdout
    assert a == b == (GOLDEN / "genus4_example.txt").read_text()


def test_binary_odd_json(capsys):
    code, out = run(["reconstruct", "binary-odd", "--form",
                     "3*x0^5 - x0^4*x1 + 2*x0^2*x1^3 + 7*x0*x1^4 - 5*x1^5",
                     "--format", "json"], capsys)
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"job", "results", "provenance", "verdict", "timings"}
    assert report["verdict"]["status"] == "VERIFIED"
    assert report["provenance"]["extension"] is None
    assert report["job"]["seed"] == 0


def test_expect_scale(capsys):
    f = "x0^5 + 2*x0^3*x1^2 - x0*x1^4 + 3*x1^5 + x0^4*x1"
    code, out = run(["reconstruct", "binary-odd", "--form", f, "--no-timings"], capsys)
    got = lines(out)["results.form"]
    code, out = run(["reconstruct", "binary-odd", "--form", f, "--expect", got,
                     "--no-timings"], capsys)
    d = lines(out)
    assert d["verdict.expect[0].scale"] == "1" and d["verdict.expect[0].proportional"] == "True"


def test_sum64_and_rank3(capsys):
    f6 = "x0^6 + 3*x0^4*x1^2 - x0^3*x1^3 + 2*x0*x1^5 - 4*x1^6 + x0^5*x1"
    f4 = "x0^4 - 2*x0^2*x1^2 + 5*x0*x1^3 + x1^4"
    code, out = run(["reconstruct", "sum64", "--form6", f6, "--form4", f4], capsys)
    assert code == 0 and "results.form6" in out and "results.form4" in out
    code, out = run(["reconstruct", "genus4", "--form6", f6, "--form4", f4], capsys)
    assert code == 0 and "X3^3" in lines(out)["results.E"]


def test_mathematical_failure_exit_2(capsys):
    code, out = run(["reconstruct", "genus4", "--quadric", SYMMETRIC_QUADRIC,
                     "--cubic", format_form(symmetric_cubic())], capsys)
    assert code == 2
    d = lines(out)
    assert d["error.type"] == "NotIndependentAtF" and d["verdict.status"] == "ERROR"
    code, _ = run(["reconstruct", "binary-odd", "--form", "x0^5"], capsys)
    assert code == 2


def test_parse_error_exit_1(capsys):
    code, out = run(["reconstruct", "binary-odd", "--form", "x0^5 + * x1^5"], capsys)
    assert code == 1
    d = lines(out)
    assert d["error.type"] == "ParseError" and "error.position" in d


def test_missing_option_exit_1(capsys):
    code, out = run(["reconstruct", "sum64", "--form6", "x0^6 + x1^6"], capsys)
    assert code == 1 and "--form4" in out


def test_battery_mismatch_exit_1(capsys):
    code, out = run(["reconstruct", "binary-odd", "--form", "x0^5 + x0*x1^4 + 2*x1^5 - x0^2*x1^3",
                     "--battery", "binary-6"], capsys)
    assert code == 1


def test_selftest(capsys):
    code, out = run(["selftest", "--level", "quick", "--seed", "3", "--no-timings"], capsys)
    assert code == 0
    d = lines(out)
    assert d["job.seed"] == "3" and d["verdict.status"] == "PASS"
    assert {"results.multinomial", "results.taylor", "results.tau-bridge",
            "results.equivariance"} <= set(d)
