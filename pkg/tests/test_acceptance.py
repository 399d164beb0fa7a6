"""Acceptance criteria, one test per criterion; each prints a single
PASS/FAIL line to the terminal."""

import subprocess
import sys

import pytest

from z22susy.verify import FAIL, FINDING, PASS, VerifyConfig, run


@pytest.fixture(scope="module")
def report():
    return run("all", VerifyConfig())


def _select(report, *prefixes):
    return [c for c in report.checks if c.id.startswith(prefixes)]


def _judge(n, title, checks, extra=True):
    bad = [c.id for c in checks if c.status == FAIL]
    ok = bool(checks) and not bad and extra
    return ok, f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  ({len(checks)} checks{', failing: ' + ', '.join(bad) if bad else ''})"


def _emit(capsys, ok, line):
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_01_bracket_table(report, capsys):
    checks = _select(report, "bracket:")
    _emit(capsys, *_judge(1, "bracket table", checks, len(checks) == 28))


def test_02_berezinian_invariance(report, capsys):
    _emit(capsys, *_judge(2, "Ber(J_S) = Ber(J_L) = 1", _select(report, "volume:")))


def test_03_covariant_lemma(report, capsys):
    checks = _select(report, "lemma:")
    findings = [c for c in checks if c.status == FINDING]
    both = all("computed:" in c.witness and "displayed:" in c.witness for c in findings)
    _emit(capsys, *_judge(3, f"covariant lemma ({len(findings)} finding)", checks, both and len(checks) == 2))


def test_04_linear_sigma(report, capsys):
    _emit(capsys, *_judge(4, "linear sigma action, EOM, superspace expansion", _select(report, "linear-sigma:")))


def test_05_nonlinear_sigma(report, capsys):
    _emit(capsys, *_judge(5, "metric Taylor series and z-constrained closure", _select(report, "nonlinear-sigma:")))


def test_06_sine_gordon(report, capsys):
    checks = _select(report, "sine-gordon:auxiliary", "sine-gordon:eliminated-action", "sine-gordon:eom", "sine-gordon:classical")
    _emit(capsys, *_judge(6, "sine-Gordon elimination, action, EOM, classical limit", checks, len(checks) == 6))


def test_07_quasi_invariance(report, capsys):
    checks = _select(report, "sine-gordon:quasi-invariance", "sine-gordon:delta-", "exotic:quasi-invariance-on-shell")
    _emit(capsys, *_judge(7, "quasi-invariance and the five delta groups", checks, len(checks) == 7))


def test_08_noether(report, capsys):
    checks = _select(
        report, "sine-gordon:current", "sine-gordon:conservation", "sine-gordon:divergence-factorization",
        "sine-gordon:divergence-display-on-shell", "exotic:current:", "exotic:current-table", "exotic:conservation", "exotic:other-currents-vanish",
    )
    _emit(capsys, *_judge(8, "Noether currents, boost table, conservation", checks, len(checks) == 20))


def test_09_exotic(report, capsys):
    _emit(capsys, *_judge(9, "exotic action and EOM", _select(report, "exotic:component-action", "exotic:eom")))


def test_10_coordinate_independence(report, capsys):
    checks = _select(report, "coordinates:")
    cfg = report.config
    _emit(capsys, *_judge(10, f"coordinate independence ({cfg['trials']} trials, z^{cfg['z_order']})", checks,
                          len(checks) == 3 and cfg["trials"] >= 50 and cfg["z_order"] == 3))


def test_11_kernel_properties(report, capsys):
    checks = _select(report, "algebra:multiplication-oracle", "algebra:graded-jacobi", "ber:multiplicative", "ber:one-plus-nilpotent")
    cfg = report.config
    sizes = cfg["multiplication_pairs"] >= 500 and cfg["jacobi_triples"] >= 100 and cfg["trials"] >= 50
    _emit(capsys, *_judge(11, "kernel oracle, Jacobi, Ber multiplicativity, Ber(1+M)", checks, sizes and len(checks) == 4))


def test_12_determinism(tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        r = subprocess.run([sys.executable, "-m", "z22susy", "run", "--suite", "all", "--seed", "0", "--json", str(path)],
                           capture_output=True, text=True)
        assert r.returncode == 0, r.stdout[-2000:] + r.stderr[-2000:]
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    _emit(capsys, ok, f"criterion 12 {'PASS' if ok else 'FAIL'}  byte-identical JSON reports across two runs ({len(outs[0])} bytes)")


def test_aggregate_has_no_failures(report):
    assert not report.failures
    assert all(c.status in (PASS, FAIL, FINDING) for c in report.checks)
