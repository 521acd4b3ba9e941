import json
import subprocess
import sys
from pathlib import Path

import pytest

from gammacm.cli import main

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(*args):
    return subprocess.run([sys.executable, "-m", "gammacm", *args], capture_output=True, text=True, timeout=120)


@pytest.mark.parametrize(
    "name, code",
    [("example2", 0), ("example2_b0c0", 1), ("tied_tail", 2), ("legendre_0.25", 0), ("legendre_0.2499", 1)],
)
def test_check_exit_codes(name, code):
    assert main(["check", str(SPECS / f"{name}.json"), "--no-timing"]) == code


def test_check_json_output_is_byte_stable():
    a = run("check", str(SPECS / "example3.json"), "--report", "json", "--no-timing")
    b = run("check", str(SPECS / "example3.json"), "--report", "json", "--no-timing")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["overall"]["status"] == "CertifiedTrue"
    assert doc["timing"] == {}


def test_text_report(capsys):
    assert main(["check", str(SPECS / "example2_b0c0.json"), "--no-timing"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("overall: CertifiedFalse")
    assert "mass_condition" in out


def test_missing_file_is_input_error(capsys):
    assert main(["check", "does/not/exist.json"]) == 3
    assert "not found" in capsys.readouterr().err


def test_malformed_spec_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": "1/2", "numerator": [{"A": "x", "a": 0, "alpha": 1}], "denominator": []}')
    assert main(["check", str(bad)]) == 3
    bad.write_text("not json")
    assert main(["check", str(bad)]) == 3


def test_bad_flags_exit_3():
    r = run("check", str(SPECS / "example2.json"), "--max-order", "40")
    assert r.returncode == 3
    assert "error" in r.stderr
    assert run("frobnicate").returncode == 3
    assert run("check", str(SPECS / "example2.json"), "--kmax", "0").returncode == 3


@pytest.mark.parametrize(
    "args, want",
    [
        (["gamma_q", "3", "--q", "0.5"], "1.5"),
        (["gamma_q", "1", "--q", "0.5"], "1"),
        (["digamma", "1"], "-0.5772156649015329"),
        (["polygamma", "1", "1"], "1.644934066848226"),
        (["phi", "1", "1", "0"], "1"),
    ],
)
def test_eval(args, want, capsys):
    assert main(["eval", *args]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(float(want), rel=1e-14)


def test_eval_q_kernel(capsys):
    assert main(["eval", "Q", "--spec", str(SPECS / "p1_a0.5.json"), "--u", "2"]) == 0
    assert float(capsys.readouterr().out) > 0


def test_eval_argument_errors(capsys):
    assert main(["eval", "gamma_q", "3"]) == 3
    assert main(["eval", "polygamma", "1.5", "2"]) == 3
    assert main(["eval", "digamma", "0"]) == 3
    assert main(["eval", "Q", "--spec", str(SPECS / "example2.json"), "--u", "1"]) == 3


def test_oracle_subcommand():
    assert main(["oracle", str(SPECS / "p1_a0.3.json")]) == 1
    assert main(["oracle", str(SPECS / "legendre_0.25.json")]) == 2


def test_dump_csv(tmp_path):
    out = tmp_path / "q.csv"
    assert main(["check", str(SPECS / "sherman.json"), "--dump", str(out), "--grid-points", "50", "--no-timing"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "u,Q" and len(lines) == 51
    out2 = tmp_path / "tau.csv"
    main(["check", str(SPECS / "example2.json"), "--dump", str(out2), "--kmax", "12", "--no-timing"])
    rows = out2.read_text().splitlines()
    assert rows[0] == "irr_class,k,t,tau_mass"


def test_corpus_subcommand():
    r = run("corpus", "--report", "json")
    assert r.returncode == 0, r.stdout
    doc = json.loads(r.stdout)
    assert doc["failures"] == 0 and len(doc["entries"]) == 20


def test_corpus_specs_match_files(tmp_path):
    assert main(["corpus", "--write", str(tmp_path)]) == 0
    for f in tmp_path.glob("*.json"):
        assert json.loads(f.read_text()) == json.loads((SPECS / f.name).read_text())
