import csv
import json
import math

import pytest

from dpaudit.cli import (
    EXIT_CONFIG, EXIT_FAILED, EXIT_INAPPLICABLE, EXIT_INFEASIBLE, EXIT_OK, main,
)


def run_cli(*argv):
    return main([str(a) for a in argv])


def plan_json(capsys, *argv):
    assert run_cli("plan", *argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_plan_ldp_pair(capsys):
    out = plan_json(capsys, "--mode", "ldp-pair", "--pair", "0,1", "--gamma", 1, "--delta", 0.8,
                    "--claimed-c", 0.63)
    assert out["pair_plan"]["m"] == 6
    assert out["guarantee"] == "theoretical"


def test_plan_inapplicable_exit_code(capsys):
    code = run_cli("plan", "--mode", "ldp-pair", "--pair", "0,1", "--gamma", 0.5,
                   "--claimed-c", 4.62)
    assert code == EXIT_INAPPLICABLE
    assert "m=200" in capsys.readouterr().err


def test_plan_infeasible_exit_code():
    assert run_cli("plan", "--mode", "ldp-pair", "--pair", "0,1", "--gamma", 0.001,
                   "--delta", 0.9, "--claimed-c", 1) == EXIT_INFEASIBLE


def test_plan_lrdp_grid(capsys):
    out = plan_json(capsys, "--mode", "lrdp-grid", "--alpha", 2, "--gamma", 0.5, "--delta", 0.9,
                    "--claimed-c", 0.33, "--claimed-d", 0.66)
    assert out["grid"]["k"] == 39


def test_overrides_void_guarantee(capsys):
    out = plan_json(capsys, "--mode", "ldp-pair", "--pair", "0,1", "--m", 10, "--n", 100)
    assert out["guarantee"] == "practical-no-guarantee"


@pytest.mark.parametrize("argv", [
    ["run", "--mode", "ldp-pair"],  # no pair
    ["run", "--mode", "lrdp-pair", "--pair", "0,1", "--claimed-c", "1"],  # no alpha
    ["plan", "--mode", "ldp-pair", "--pair", "0,1", "--claimed-c", "1",
     "--mechanism", "nope:x=1"],
])
def test_config_errors(argv):
    assert run_cli(*argv) == EXIT_CONFIG


def test_usage_errors_use_config_exit_code():
    with pytest.raises(SystemExit) as info:
        run_cli("run", "--mode", "bogus")
    assert info.value.code == EXIT_CONFIG


def test_all_runs_failed_exit_code(tmp_path):
    code = run_cli("run", "--mode", "ldp-pair", "--pair", "0,1", "--mechanism",
                   "trunc-laplace:B=0.05", "--m", 50, "--n", 10, "--reps", 3, "--workers", 1,
                   "--out", tmp_path)
    assert code == EXIT_FAILED
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["summary"]["failed"] == 3


def _strip_times(report):
    report.pop("wall_time")
    for r in report.get("runs", []):
        r.pop("wall_time", None)
    return report


def test_run_report_round_trip(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert run_cli("run", "--mode", "ldp-pair", "--pair", "0,1", "--m", 12, "--n", 3000,
                   "--reps", 4, "--seed", 17, "--workers", 1, "--out", first) == EXIT_OK
    assert run_cli("run", "--config", first / "report.json", "--workers", 1,
                   "--out", second) == EXIT_OK
    a = _strip_times(json.loads((first / "report.json").read_text()))
    b = _strip_times(json.loads((second / "report.json").read_text()))
    assert a == b
    assert (first / "runs.csv").read_text() == (second / "runs.csv").read_text()


def test_runs_csv_has_full_precision(tmp_path):
    run_cli("run", "--mode", "ldp-pair", "--pair", "0,1", "--m", 12, "--n", 3000, "--reps", 3,
            "--workers", 1, "--out", tmp_path)
    report = json.loads((tmp_path / "report.json").read_text())
    with (tmp_path / "runs.csv").open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["estimate"]) for r in rows] == [r["estimate"] for r in report["runs"]]


def test_seed_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("DPAUDIT_SEED", "123")
    run_cli("run", "--mode", "ldp-pair", "--pair", "0,1", "--m", 8, "--n", 500, "--workers", 1,
            "--out", tmp_path)
    assert json.loads((tmp_path / "report.json").read_text())["config"]["seed"] == 123


def test_yaml_config_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "audit.yaml"
    cfg.write_text("mode: ldp-pair\npair: [0, 1]\ngamma: 1.0\ndelta: 0.8\nclaimed_c: 0.5\n"
                   "mechanism:\n  kind: trunc-laplace\n  B: 2.0\n")
    out = plan_json(capsys, "--config", cfg, "--claimed-c", 0.63)
    assert out["config"]["claimed_c"] == 0.63
    assert out["config"]["mechanism"]["B"] == 2.0
    assert out["pair_plan"]["m"] == 6


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "audit.yaml"
    cfg.write_text("mode: ldp-pair\nbogus: 1\n")
    assert run_cli("plan", "--config", cfg) == EXIT_CONFIG


def test_grid_run_writes_grid_csv(tmp_path):
    assert run_cli("run", "--mode", "ldp-grid", "--claimed-d", 3.16, "--k", 4, "--m", 6,
                   "--n", 2000, "--workers", 1, "--out", tmp_path) == EXIT_OK
    with (tmp_path / "grid.csv").open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    assert {"i", "j", "x_i", "x_j", "status", "estimate"} <= set(rows[0])


def test_safety_command(tmp_path, capsys):
    code = run_cli("safety", "--mechanism", "trunc-laplace:B=0.5", "--claimed-c", 1,
                   "--pair", "0,1", "--gamma", 2, "--delta", 0.8, "--reps", 30, "--workers", 1,
                   "--out", tmp_path)
    assert code == EXIT_OK
    assert "SUSPICIOUS" in capsys.readouterr().out
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["verdict"]["suspicious"] is True


def test_demo_command(capsys):
    assert run_cli("demo-impossibility", "--reps", 20, "--workers", 1) == EXIT_OK
    assert "20/20" in capsys.readouterr().out


def test_tables_command(tmp_path, capsys):
    assert run_cli("tables", "III", "--out", tmp_path) == EXIT_OK
    assert "16/16" in capsys.readouterr().out
    with (tmp_path / "table_III.csv").open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 16
    assert all(r["match"] == "True" for r in rows)


def test_tables_v_marks_discrepancy(tmp_path, capsys):
    assert run_cli("tables", "V", "--out", tmp_path) == EXIT_OK
    assert "known discrepancy" in capsys.readouterr().out


def _sweep(tmp_path, *argv):
    assert run_cli("sweep", *argv, "--out", tmp_path) == EXIT_OK
    path = next(tmp_path.glob("sweep_*.csv"))
    with path.open(encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_gamma_sweep_increasing_as_gamma_shrinks(tmp_path):
    rows = _sweep(tmp_path, "gamma", "--values", "1,0.5,0.2,0.1,0.05", "--fixed", "delta=0.9")
    logs = [float(r["log10_n"]) for r in rows]
    assert all(b > a for a, b in zip(logs, logs[1:]))


def test_delta_sweep_nondecreasing(tmp_path):
    rows = _sweep(tmp_path, "delta", "--range", "0.1,0.95,8", "--fixed", "gamma=0.5")
    ns = [int(r["n"]) for r in rows]
    assert ns == sorted(ns)


def test_alpha_sweep_increasing(tmp_path):
    rows = _sweep(tmp_path, "alpha", "--kind", "lrdp", "--values", "1.5,2,3,4")
    ns = [int(r["n"]) for r in rows]
    assert all(b > a for a, b in zip(ns, ns[1:]))


def test_sweep_infeasible_points_are_nan_rows(tmp_path):
    rows = _sweep(tmp_path, "C", "--values", "0.5,1.99,2.5")
    assert rows[-1]["status"] == "TheoremInapplicableError"
    assert math.isnan(float(rows[-1]["n"]))
