"""Command line interface: formats, exit codes, round trips."""

import csv
import json
import subprocess
import sys

import pytest

from infbvp import observed_order

EXE = [sys.executable, "-m", "infbvp"]


def run_cli(*args):
    return subprocess.run(EXE + list(args), capture_output=True, text=True)


def parse_csv(text):
    return [row for row in csv.reader(text.splitlines())]


def test_module_entry_point_help():
    proc = run_cli("--help")
    assert proc.returncode == 0
    for word in ("solve", "sweep", "extrapolate", "grid"):
        assert word in proc.stdout


def test_grid_table_frozen_rows():
    proc = run_cli("grid", "--map", "log", "--c", "5", "--N", "20")
    assert proc.returncode == 0
    rows = parse_csv(proc.stdout)
    assert rows[0] == ["n", "xi", "x"]
    assert rows[1] == ["0", "0.000000", "0.000000"]
    assert rows[20] == ["19", "0.950000", "14.978661"]
    assert rows[21] == ["20", "1.000000", "inf"]
    assert len(rows) == 22


def test_grid_whole_line_table():
    proc = run_cli("grid", "--map", "tan", "--c", "2", "--N", "3")
    assert proc.returncode == 0
    rows = parse_csv(proc.stdout)
    assert rows[1] == ["-3", "-1.000000", "-inf"]
    assert rows[4] == ["0", "0.000000", "0.000000"]
    assert rows[7] == ["3", "1.000000", "inf"]


def test_grid_json_uses_infinity_tokens():
    proc = run_cli("grid", "--map", "log", "--c", "5", "--N", "4", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["map"] == "log" and doc["c"] == 5.0 and doc["N"] == 4
    assert doc["nodes"][-1]["x"] == "inf"
    assert isinstance(doc["nodes"][0]["x"], float)


def test_solve_writes_node_table_and_summary():
    proc = run_cli("solve", "--problem", "pile", "--N", "80")
    assert proc.returncode == 0
    rows = parse_csv(proc.stdout)
    assert rows[0] == ["n", "x"] + [f"u{k}" for k in (1, 2, 3, 4)]
    assert rows[1][:2] == ["0", "0.000000"]
    summary = {row[0]: row[1] for row in rows if len(row) == 2}
    assert summary["problem"] == "pile"
    assert summary["converged"] == "true"
    assert summary["N"] == "80"
    assert summary["u0"] == "1.421469"
    assert summary["du0"] == "-0.808094"
    assert int(summary["iterations"]) <= 8


def test_solve_json_document():
    proc = run_cli("solve", "--problem", "falkner-skan", "--N", "20",
                   "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["problem"] == "falkner-skan"
    assert doc["converged"] is True
    assert doc["reports"]["fpp0"] == pytest.approx(1.238724, abs=2e-5)
    assert doc["nodes"][-1]["x"] == "inf"
    assert len(doc["nodes"]) == 21
    assert len(doc["nodes"][0]["u"]) == 3


def test_solve_raw_round_trips_full_precision():
    proc = run_cli("solve", "--problem", "falkner-skan", "--N", "20", "--raw")
    rows = parse_csv(proc.stdout)
    summary = {row[0]: row[1] for row in rows if len(row) == 2}
    json_proc = run_cli("solve", "--problem", "falkner-skan", "--N", "20",
                        "--format", "json")
    reports = json.loads(json_proc.stdout)["reports"]
    assert float(summary["fpp0"]) == reports["fpp0"]


def test_solve_rejects_multiple_grids():
    proc = run_cli("solve", "--problem", "pile", "--N", "20,40")
    assert proc.returncode == 2
    assert "single" in proc.stderr


def test_solve_rejects_whole_line_map():
    proc = run_cli("solve", "--problem", "pile", "--map", "tan", "--N", "20")
    assert proc.returncode == 2
    assert "solver" in proc.stderr


def test_solve_nonconvergence_exit_code():
    proc = run_cli("solve", "--problem", "falkner-skan", "--N", "20",
                   "--max-iter", "1")
    assert proc.returncode == 1


def test_sweep_table_layout_and_orders():
    proc = run_cli("sweep", "--problem", "falkner-skan", "--N", "20,40,80")
    assert proc.returncode == 0
    rows = parse_csv(proc.stdout)
    assert rows[0] == ["N", "iterations", "converged",
                       "fpp0", "fpp0_order", "fpp_inf", "fpp_inf_order"]
    assert [row[0] for row in rows[1:]] == ["20", "40", "80"]
    assert [row[3] for row in rows[1:]] == ["1.238724", "1.234124", "1.232972"]
    assert all(row[2] == "true" for row in rows[1:])
    # order entries exist only on interior rows and are computed from the
    # printed values against the finest one
    expected = observed_order(1.238724, 1.234124, 1.232972)
    assert rows[1][4] == "" and rows[3][4] == ""
    assert rows[2][4] == f"{expected:.6f}"


def test_sweep_requires_doubling():
    proc = run_cli("sweep", "--problem", "pile", "--N", "20,50")
    assert proc.returncode == 2
    assert "double" in proc.stderr


def test_sweep_keeps_rows_on_nonconvergence():
    proc = run_cli("sweep", "--problem", "falkner-skan", "--N", "20,40",
                   "--max-iter", "2")
    assert proc.returncode == 1
    assert "did not converge" in proc.stderr
    rows = parse_csv(proc.stdout)
    assert [row[0] for row in rows[1:]] == ["20", "40"]
    assert all(row[2] == "false" for row in rows[1:])


def test_sweep_json_rows():
    proc = run_cli("sweep", "--problem", "pile", "--N", "20,40",
                   "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["problem"] == "pile"
    assert [row["N"] for row in doc["rows"]] == [20, 40]
    assert all(row["converged"] for row in doc["rows"])
    assert doc["rows"][0]["u0"] == pytest.approx(1.420337, abs=2e-5)
    # two rows have no interior entry, so no orders are defined
    assert all(row["u0_order"] is None for row in doc["rows"])


def test_sweep_then_extrapolate_round_trip(tmp_path):
    sweep_file = tmp_path / "sweep.csv"
    proc = run_cli("sweep", "--problem", "pile", "--N", "40,80,160",
                   "--raw", "--out", str(sweep_file))
    assert proc.returncode == 0
    assert sweep_file.exists()

    extra = run_cli("extrapolate", str(sweep_file), "--quantity", "u0")
    assert extra.returncode == 0
    rows = parse_csv(extra.stdout)
    assert rows[0] == ["N", "T0", "T1", "T2"]
    assert rows[1] == ["40", "1.421243", "", ""]
    assert rows[2] == ["80", "1.421469", "1.421544", ""]
    assert rows[3] == ["160", "1.421526", "1.421545", "1.421545"]

    slope = run_cli("extrapolate", str(sweep_file), "--quantity", "du0")
    rows = parse_csv(slope.stdout)
    assert rows[2][2] == "-0.808147"
    assert rows[3][2] == "-0.808149"
    assert rows[3][3] == "-0.808149"


def test_extrapolate_json_reports_stop_rule(tmp_path):
    sweep_file = tmp_path / "sweep.csv"
    run_cli("sweep", "--problem", "pile", "--N", "40,80,160",
            "--raw", "--out", str(sweep_file))
    proc = run_cli("extrapolate", str(sweep_file), "--quantity", "u0",
                   "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["stop_rule"] == "nest"
    assert doc["ns"] == [40, 80, 160]
    assert doc["columns"][0] == [1.421243, 1.421469, 1.421526]


def test_extrapolate_unknown_column(tmp_path):
    sweep_file = tmp_path / "sweep.csv"
    sweep_file.write_text("N,u0\n40,1.0\n80,1.1\n")
    proc = run_cli("extrapolate", str(sweep_file), "--quantity", "bogus")
    assert proc.returncode == 2
    assert "bogus" in proc.stderr


def test_extrapolate_reports_bad_line(tmp_path):
    sweep_file = tmp_path / "sweep.csv"
    sweep_file.write_text("N,u0\n40,1.0\n80,oops\n")
    proc = run_cli("extrapolate", str(sweep_file), "--quantity", "u0")
    assert proc.returncode == 2
    assert "line 3" in proc.stderr


def test_extrapolate_missing_file(tmp_path):
    proc = run_cli("extrapolate", str(tmp_path / "nope.csv"), "--quantity", "u0")
    assert proc.returncode == 2


def test_usage_errors_exit_two():
    assert run_cli().returncode == 2
    assert run_cli("solve", "--problem", "unknown", "--N", "8").returncode == 2
    assert run_cli("solve", "--problem", "pile").returncode == 2
