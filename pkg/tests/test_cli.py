import json
import subprocess
import sys

import pytest

from z22susy.cli import ConfigError, load_config, main
from z22susy.verify import VerifyConfig


def test_run_superspace_exit_and_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", "--suite", "superspace", "--json", str(out)]) == 0
    text = capsys.readouterr().out
    assert "PASS     bracket:[Q-,Q+]=Z" in text
    rep = json.loads(out.read_text())
    assert rep["report_version"] == 1 and "timing" not in rep
    assert rep["summary"]["fail"] == 0
    assert any(c["status"] == "finding" for c in rep["checks"])


def test_findings_do_not_fail(capsys):
    assert main(["run", "--suite", "superspace"]) == 0


def test_failure_sets_exit_code(monkeypatch, capsys):
    from z22susy import verify as V

    def broken(cfg):
        return [V.Check("x:broken", "property", V.FAIL, "witness")]

    monkeypatch.setitem(V.RUNNERS, "algebra", broken)
    assert main(["run", "--suite", "algebra"]) == 1


def test_config_file(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[verify]\nseed = 4\ntrials = 2\n")
    cfg = load_config(str(p), {"trials": None, "z_order": 1, "seed": None})
    assert cfg == VerifyConfig(seed=4, trials=2, z_order=1)


@pytest.mark.parametrize("body", ["seed = ", "bogus = 1", "trials = -1", "trials = 'x'"])
def test_config_errors(tmp_path, body):
    p = tmp_path / "c.toml"
    p.write_text(body + "\n")
    with pytest.raises(ConfigError):
        load_config(str(p), {})


def test_config_error_exit_code(tmp_path, capsys):
    p = tmp_path / "c.toml"
    p.write_text("nope = 1\n")
    assert main(["run", "--suite", "algebra", "--config", str(p)]) == 2


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit):
        main(["run", "--suite", "nope"])


def test_expand(capsys):
    assert main(["expand", "free", "superspace"]) == 0
    assert capsys.readouterr().out.strip() == "D₊ΦD₋Φ"
    assert main(["expand", "sine-gordon", "eliminated", "--latex"]) == 0
    assert r"\sin^{2}" in capsys.readouterr().out
    assert main(["expand", "nope", "component"]) == 2
    assert main(["expand", "free", "nope"]) == 2


def test_render_round_trip(tmp_path, capsys):
    assert main(["expand", "exotic", "component", "--format", "serial"]) == 0
    serial = capsys.readouterr().out
    f = tmp_path / "e.txt"
    f.write_text(serial)
    assert main(["render", str(f), "--format", "serial"]) == 0
    assert capsys.readouterr().out == serial
    assert main(["render", str(f), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["terms"]


def test_render_parse_error_location(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("(graded-expr 1\n (term 1 (theta_- 1)\n")
    assert main(["render", str(f)]) == 2
    err = capsys.readouterr().err
    assert f"{f}:" in err and "missing ')'" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "z22susy", "expand", "free", "component"], capture_output=True, text=True)
    assert r.returncode == 0 and "ψ₊" in r.stdout
