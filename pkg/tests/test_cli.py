"""
Command-line tests: exit codes and report files
"""
import json

import numpy as np
import pytest
from typer.testing import CliRunner

from src.cli.main import app

runner = CliRunner()


def write_config(tmp_path, name="run.json", **data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def three_sites(tmp_path):
    return write_config(tmp_path, m=[1, 1, 1], k=1, z=[[0, 0], [1, 0], [2, 0]], mode="exact")


def test_version():
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "v1.0.0" in result.output


def test_count(tmp_path, three_sites):
    out = tmp_path / "count.json"
    result = runner.invoke(app, ["count", "--config", three_sites, "--out", str(out)])
    assert result.exit_code == 0
    counts = json.loads(out.read_text(encoding="utf-8"))["counts"]
    assert counts["w"] == 2
    assert counts["d"] == 2
    assert counts["regime"] == "IsolatedPoints"
    assert counts["admissible_sequences"] == 2


def test_count_in_lines_regime(tmp_path):
    config = write_config(tmp_path, m=[1, 1], k=2, z=[[0, 0], [1, 0]])
    assert runner.invoke(app, ["count", "-c", config]).exit_code == 0


def test_solve_then_verify(tmp_path, three_sites):
    solved = tmp_path / "solve.json"
    result = runner.invoke(app, ["solve", "-c", three_sites, "-o", str(solved)])
    assert result.exit_code == 0
    data = json.loads(solved.read_text(encoding="utf-8"))
    assert data["found"] == data["expected"] == 2

    verified = tmp_path / "verify.json"
    result = runner.invoke(app, ["verify", "--report", str(solved), "-o", str(verified)])
    assert result.exit_code == 0
    data = json.loads(verified.read_text(encoding="utf-8"))
    assert data["passed"]
    assert data["basis"]["is_basis"]


def test_verify_inline(three_sites):
    assert runner.invoke(app, ["verify", "-c", three_sites]).exit_code == 0


def test_stale_report(tmp_path, three_sites):
    solved = tmp_path / "solve.json"
    runner.invoke(app, ["solve", "-c", three_sites, "-o", str(solved)])
    result = runner.invoke(app, ["verify", "-r", str(solved), "--seed", "5"])
    assert result.exit_code == 2


def test_solve_wrong_regime(tmp_path):
    config = write_config(tmp_path, m=[1, 1], k=2, z=[[0, 0], [1, 0]])
    assert runner.invoke(app, ["solve", "-c", config]).exit_code == 2


def test_solve_missing_config():
    assert runner.invoke(app, ["solve"]).exit_code == 2


def test_solve_invalid_config(tmp_path):
    config = write_config(tmp_path, m=[1, 1], k=1, z=[[0, 0], [0, 0]])
    assert runner.invoke(app, ["solve", "-c", config]).exit_code == 2


def test_invalid_mode(three_sites):
    assert runner.invoke(app, ["solve", "-c", three_sites, "--mode", "symbolic"]).exit_code == 2


def test_degenerate_configuration(tmp_path):
    z = [[float(np.cos(2 * np.pi * l / 3)), float(np.sin(2 * np.pi * l / 3))] for l in range(3)]
    config = write_config(tmp_path, m=[1, 1, 1], k=1, z=z)
    assert runner.invoke(app, ["solve", "-c", config]).exit_code == 3


def test_lines(tmp_path):
    out = tmp_path / "lines.json"
    config = write_config(tmp_path, m=[1, 1, 1], k=3, z=[[0, 0], [1, 0], [2, 0]], mode="exact")
    result = runner.invoke(app, ["lines", "-c", config, "-o", str(out)])
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert len(data["lines"]) == 2
    assert data["intersecting_lines"] == 0


def test_zero_exponent_site_is_ignored(tmp_path):
    out = tmp_path / "solve.json"
    config = write_config(tmp_path, m=[1, 0, 1], k=1, z=[[0, 0], [3, 0], [1, 0]], mode="exact")
    assert runner.invoke(app, ["solve", "-c", config, "-o", str(out)]).exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["m"] == [1, 1]
    assert data["orbits"][0]["lam_exact"] == ["1/2"]


def test_lines_wrong_regime(three_sites):
    assert runner.invoke(app, ["lines", "-c", three_sites]).exit_code == 2
