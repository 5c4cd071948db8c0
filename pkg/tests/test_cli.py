from __future__ import annotations

import csv
import io
import json
import pathlib
import subprocess
import sys

import pytest

from fracburgers.cli import main

sys.path.insert(0, str(pathlib.Path(__file__).parent))
from cli_cases import CASES  # noqa: E402

GOLDEN = pathlib.Path(__file__).parent / "golden"


def _cli(argv):
    return subprocess.run([sys.executable, "-m", "fracburgers.cli", *argv], capture_output=True, check=False)


def _close(a, b):
    """Structural equality with a small relative tolerance on numbers.

    Quadrature results may differ in the last bits between the numba and
    numpy kernel paths; everything else must match exactly.
    """
    if isinstance(a, dict):
        return isinstance(b, dict) and a.keys() == b.keys() and all(_close(a[k], b[k]) for k in a)
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(map(_close, a, b))
    if isinstance(a, float) or isinstance(b, float):
        return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b)) or abs(a - b) <= 1e-12
    return a == b


def _cells(text):
    out = []
    for row in csv.reader(io.StringIO(text)):
        parsed = []
        for cell in row:
            try:
                parsed.append(float(cell))
            except ValueError:
                parsed.append(cell)
        out.append(parsed)
    return out


@pytest.mark.parametrize("name", sorted(CASES))
def test_matches_golden(name):
    res = _cli(CASES[name])
    assert res.returncode == 0, res.stderr.decode()
    want = (GOLDEN / f"{name}.out").read_bytes().decode()
    got = res.stdout.decode()
    if want.lstrip().startswith("{"):
        assert _close(json.loads(want), json.loads(got))
    elif name.startswith("selftest"):
        assert got == want
    else:
        assert _close(_cells(want), _cells(got))


def test_bracket_table_has_36_rows():
    rows = list(csv.reader(io.StringIO(_cli(CASES["bracket_table"]).stdout.decode())))
    assert len(rows) == 37


def test_assert_zero_fails_for_thm41_half():
    res = _cli(["verify", "--solution", "thm41", "--beta", "0.5", "--mode", "canonical", "--assert-zero"])
    assert res.returncode == 1
    assert json.loads(res.stdout)["maxAbs"] > 0.05


def test_numeric_thm45_gate_passes():
    res = _cli(["verify", "--solution", "thm45", "--k", "1", "--alpha", "0.5", "--beta", "1", "--mode", "numeric",
                "--grid", "0.5:2:16,0.5:2:16", "--assert-zero"])
    assert res.returncode == 0
    assert json.loads(res.stdout)["maxAbs"] <= 1e-3


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["verify", "--solution", "thm43", "--grid", "1:2:3,1:2:8"]) == 2
    assert main(["verify", "--solution", "unknown"]) == 2
    assert main(["nonsense"]) == 2
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["verify", "--config", str(cfg), "--solution", "thm43"]) == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# residual run\nsolution = thm43\nalpha = 0.5\nbeta = 0.5\ngrid = 0.5:2:8,0.5:2:8\n")
    out = tmp_path / "r.json"
    assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["solutionId"] == "thm43"
    assert main(["verify", "--config", str(cfg), "--solution", "thm45", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["solutionId"] == "thm45"


def test_selftest_filter_runs_only_group(capsys):
    assert main(["selftest", "--filter", "fracpoly"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert all("fracpoly." in ln for ln in lines[:-1])


def test_selftest_detects_corrupted_gamma(monkeypatch, capsys):
    from fracburgers import specfun

    bad = list(specfun.LANCZOS_COEFFS)
    bad[1] *= 1.001
    monkeypatch.setattr(specfun, "LANCZOS_COEFFS", tuple(bad))
    assert main(["selftest", "--filter", "specfun"]) == 1
    assert "FAIL [1] specfun.gamma" in capsys.readouterr().out
