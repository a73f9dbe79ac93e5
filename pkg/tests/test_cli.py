import json

import pytest

from gasketcert.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == EXIT_PASS
    assert "diam^2(E) = 25" in out and "gap^2 = 3/256" in out


def test_base_case_m1(capsys):
    code, out, _ = run(capsys, "base-case", "--m", "1", "--sample", "20")
    assert code == EXIT_PASS
    assert "admissible=12 violations=0" in out


def test_enumerate_count(capsys):
    code, out, _ = run(capsys, "enumerate", "--m", "1", "--count-only")
    assert code == EXIT_PASS and "candidates=936 recount=936" in out
    code, out, _ = run(capsys, "enumerate", "--m", "1")
    assert len(out.splitlines()) == 936


def test_ifs(capsys):
    code, out, _ = run(capsys, "ifs", "--n", "2", "--max-scale", "1")
    assert code == EXIT_PASS and "verify=holds" in out
    code, out, _ = run(capsys, "ifs", "--n", "5", "--max-scale", "2")
    assert code == EXIT_PASS and "not a proof" in out
    code, out, _ = run(capsys, "ifs", "--n", "3", "--max-scale", "1")
    assert code == EXIT_FAIL


def test_render(capsys, tmp_path):
    out_file = tmp_path / "a0.svg"
    code, out, _ = run(capsys, "render", "--figure", "A0", "--depth", "0", "--out", str(out_file))
    assert code == EXIT_PASS
    assert out_file.read_text().count("<polygon ") == 27


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["base-case", "--m", "7"],
    ["render", "--figure", "42", "--out", "x.svg"],
    ["render", "--figure", "1", "--depth", "13", "--out", "x.svg"],
    ["--sabotage", "nonsense=1", "constants"],
    ["--workers", "0", "constants"],
])
def test_usage_errors(capsys, argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


@pytest.mark.parametrize("sabotage, stage", [
    ("P5=(3/4, 1/2*sqrt3)", "geometry"),
    ("P8=(7/16, 3/8*sqrt3)", "geometry"),
    ("gap_sq=1/256", "constant_checks"),
    ("diam_sq=24", "constant_checks"),
    ("step_exponent=8", "constant_checks"),
])
def test_exit_code_follows_verdict(capsys, tmp_path, sabotage, stage):
    cert = tmp_path / "cert.json"
    code, _, err = run(capsys, "--sabotage", sabotage, "--cert-out", str(cert), "verify")
    doc = json.loads(cert.read_text())
    assert code == EXIT_FAIL and doc["verdict"] == "fail" and doc["failed_at"] == stage
    assert "verdict: fail" in err
