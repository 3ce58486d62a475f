"""Command-line interface behavior and exit codes."""

import json
import os
import subprocess
import sys

import pytest

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(*args, check=True):
    out = subprocess.run(
        [sys.executable, "-m", "clusteralg.cli", *args],
        capture_output=True,
        text=True,
    )
    if check and out.returncode != 0:
        raise AssertionError(
            "exit %d\nstdout: %s\nstderr: %s"
            % (out.returncode, out.stdout, out.stderr)
        )
    return out


def test_f_poly_output():
    out = run_cli("f-poly", "--type", "A2", "--path", "2,1")
    assert out.stdout.splitlines() == [
        "F[1] = y1*y2 + y1 + 1",
        "F[2] = y2 + 1",
    ]


def test_f_poly_json():
    out = run_cli("f-poly", "--type", "A2", "--path", "2,1", "--json")
    data = json.loads(out.stdout)
    assert set(data) == {"F"} and len(data["F"]) == 2


def test_g_vector_and_d_vector():
    out = run_cli("g-vector", "--type", "A2", "--path", "2,1")
    assert "(-1, 0)" in out.stdout and "(0, -1)" in out.stdout
    out = run_cli("d-vector", "--type", "A2", "--path", "2,1")
    assert "(1, 1)" in out.stdout and "(0, 1)" in out.stdout


def test_graph_summary_line():
    out = run_cli("graph", "--type", "A2", "--coeffs", "principal")
    assert out.stdout.strip() == "vertices=5 edges=5 finite=true"


def test_graph_json():
    out = run_cli("graph", "--type", "A3", "--coeffs", "trivial", "--json")
    data = json.loads(out.stdout)
    assert data["vertices"] == 14 and data["finite"] is True


def test_mutate_round_trip(tmp_path):
    src = tmp_path / "b.json"
    src.write_text(json.dumps({"B": [[0, 2], [-1, 0]]}))
    out = run_cli("mutate", "--matrix", str(src), "--path", "1", "--json")
    data = json.loads(out.stdout)
    assert data["B"] == [[0, -2], [1, 0]]


def test_walk_matches_expected_file():
    expected = open(
        os.path.join(PKG_ROOT, "tests", "data", "walk_A2_principal_expected.txt")
    ).read()
    out = run_cli("walk", "--type", "A2", "--path", "2,1,2,1,2")
    assert out.stdout == expected


def test_belt_command():
    out = run_cli("belt", "--type", "A2", "--range", "0:5")
    assert "x[1;0] = x1" in out.stdout


def test_ysystem_command():
    out = run_cli(
        "ysystem", "--type", "A2", "--steps", "4", "--semifield", "universal"
    )
    assert "y[1;3]" in out.stdout


def test_universal_and_specialize():
    out = run_cli("universal", "--type", "A2")
    assert "p[a1+a2]" in out.stdout
    out = run_cli("specialize", "--type", "A2", "--target", "principal")
    assert "phi(p[a1]) = y1" in out.stdout


def test_check_command_reports_clean():
    out = run_cli("check", "--type", "A2")
    assert out.returncode == 0
    assert "violations=0" in out.stdout.replace(" ", "") or "0 violation" in out.stdout


def test_usage_error_exit_code_2():
    out = run_cli("walk", "--type", "A2", "--no-such-flag", check=False)
    assert out.returncode == 2


def test_bad_input_exit_code():
    out = run_cli("walk", "--type", "Z9", "--path", "1", check=False)
    assert out.returncode in (1, 2)
    assert out.stderr


def test_out_flag_writes_file(tmp_path):
    dest = tmp_path / "out.txt"
    run_cli("f-poly", "--type", "A2", "--path", "2,1", "--out", str(dest))
    assert dest.read_text().startswith("F[1] = ")
