"""Command-line interface contract: exit codes, strict configs, artifacts."""

from __future__ import annotations

import json
import re

import pytest

from lvcontrol.cli import run

FLOAT_RE = re.compile(r"-?\d+\.?\d*(?:[eE][-+]?\d+)?")


def sim_config(**over):
    doc = {
        "version": 1,
        "grid": {"L": 4.0, "n": 41},
        "params": {"a": 1.5, "b": 3.5},
        "scheme": "imex_cn",
        "dt": 0.01,
        "t_end": 1.0,
        "snapshot_stride": 0.25,
        "init": {"kind": "constant", "y1": 0.5, "y2": 0.5},
        "controls": {
            "y1_left": {"mode": "dirichlet_const", "value": 1.0},
            "y1_right": {"mode": "dirichlet_const", "value": 1.0},
            "y2_left": {"mode": "dirichlet_const", "value": 0.0},
            "y2_right": {"mode": "dirichlet_const", "value": 0.0},
        },
    }
    doc.update(over)
    return doc


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def assert_sig_digits(doc, limit=12):
    """Every float in a JSON document must survive a 12-significant-digit
    round trip, i.e. carry no excess precision."""
    if isinstance(doc, dict):
        for v in doc.values():
            assert_sig_digits(v, limit)
    elif isinstance(doc, list):
        for v in doc:
            assert_sig_digits(v, limit)
    elif isinstance(doc, float):
        assert doc == float(f"{doc:.{limit}g}")


class TestArgparse:
    def test_no_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == 2

    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run(["frobnicate"])
        assert exc.value.code == 2


class TestConfigStrictness:
    def test_missing_version_exits_2(self, tmp_path, capsys):
        doc = sim_config()
        del doc["version"]
        assert run(["simulate", "--config", write_config(tmp_path, doc),
                    "--out-dir", str(tmp_path)]) == 2
        assert '"version": 1' in capsys.readouterr().err

    def test_unknown_key_exits_2_and_names_it(self, tmp_path, capsys):
        doc = sim_config(solver="magic")
        assert run(["simulate", "--config", write_config(tmp_path, doc),
                    "--out-dir", str(tmp_path)]) == 2
        err = capsys.readouterr().err
        assert "solver" in err and "allowed" in err

    def test_invalid_json_exits_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert run(["simulate", "--config", str(path), "--out-dir", str(tmp_path)]) == 2

    def test_missing_file_exits_2(self, tmp_path):
        assert run(["simulate", "--config", str(tmp_path / "absent.json"),
                    "--out-dir", str(tmp_path)]) == 2

    def test_unstable_explicit_dt_exits_2(self, tmp_path):
        doc = sim_config(scheme="explicit", dt=0.05)
        assert run(["simulate", "--config", write_config(tmp_path, doc),
                    "--out-dir", str(tmp_path)]) == 2

    def test_profile_init_kind_rejected(self, tmp_path, capsys):
        doc = sim_config(init={"kind": "profile", "n": 41, "sha256_16": "0" * 16})
        assert run(["simulate", "--config", write_config(tmp_path, doc),
                    "--out-dir", str(tmp_path)]) == 2
        assert "arrays" in capsys.readouterr().err

    def test_own_output_config_is_reusable(self, tmp_path):
        """Summaries embed the resolved config; feeding one back in (with its
        resolved_dt) must be accepted."""
        out1 = tmp_path / "first"
        assert run(["simulate", "--config", write_config(tmp_path, sim_config()),
                    "--out-dir", str(out1)]) == 0
        summary = json.loads((out1 / "simulate_summary.json").read_text())
        out2 = tmp_path / "second"
        path = write_config(tmp_path, summary["config"], "echoed.json")
        assert run(["simulate", "--config", path, "--out-dir", str(out2)]) == 0


class TestSimulate:
    def test_artifacts_and_exit_zero(self, tmp_path):
        assert run(["simulate", "--config", write_config(tmp_path, sim_config()),
                    "--out-dir", str(tmp_path)]) == 0
        traj = (tmp_path / "trajectory.csv").read_text()
        assert traj.startswith("# config:")
        summary = json.loads((tmp_path / "simulate_summary.json").read_text())
        assert summary["config"]["version"] == 1
        assert summary["config"]["resolved_dt"] == 0.01
        assert summary["final"]["t"] == 1.0
        assert_sig_digits(summary)

    def test_flag_overrides_land_in_config(self, tmp_path):
        assert run(["simulate", "--config", write_config(tmp_path, sim_config()),
                    "--out-dir", str(tmp_path), "--grid-n", "61", "--t-end", "0.5",
                    "--dt", "0.02"]) == 0
        summary = json.loads((tmp_path / "simulate_summary.json").read_text())
        assert summary["config"]["grid"]["n"] == 61
        assert summary["config"]["t_end"] == 0.5
        assert summary["config"]["dt"] == 0.02

    def test_deterministic_outputs(self, tmp_path):
        cfg = write_config(tmp_path, sim_config())
        d1, d2 = tmp_path / "run1", tmp_path / "run2"
        assert run(["simulate", "--config", cfg, "--out-dir", str(d1)]) == 0
        assert run(["simulate", "--config", cfg, "--out-dir", str(d2)]) == 0
        assert (d1 / "trajectory.csv").read_bytes() == (d2 / "trajectory.csv").read_bytes()
        s1 = json.loads((d1 / "simulate_summary.json").read_text())
        s2 = json.loads((d2 / "simulate_summary.json").read_text())
        s1.pop("runtime_s"), s2.pop("runtime_s")  # wall clock is reporting, not result
        assert s1 == s2

    def test_csv_values_are_12_digit(self, tmp_path):
        assert run(["simulate", "--config", write_config(tmp_path, sim_config()),
                    "--out-dir", str(tmp_path)]) == 0
        body = [ln for ln in (tmp_path / "trajectory.csv").read_text().splitlines()
                if ln and not ln.startswith("#") and not ln.startswith("t,")]
        for token in FLOAT_RE.findall(body[-1]):
            assert float(token) == float(f"{float(token):.12g}")


class TestBarrierAndThreshold:
    def test_barrier_exists_at_strong_competition(self, tmp_path):
        assert run(["barrier", "--a", "1.5", "--b", "3.5", "--L", "8",
                    "--grid-n", "101", "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "barrier_summary.json").read_text())
        assert doc["exists"] is True
        assert doc["exceeds_coexistence"] is True
        assert (tmp_path / "barrier_profile.csv").exists()
        assert_sig_digits(doc)

    def test_barrier_washed_out_below_threshold(self, tmp_path):
        assert run(["barrier", "--a", "1.5", "--b", "2.6", "--L", "8",
                    "--grid-n", "101", "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "barrier_summary.json").read_text())
        assert doc["exists"] is False
        assert not (tmp_path / "barrier_profile.csv").exists()

    def test_threshold_bad_bracket_exits_2(self, tmp_path, capsys):
        assert run(["threshold", "b", "--a", "1.5", "--L", "8", "--lo", "3.6",
                    "--hi", "3.8", "--grid-n", "101", "--out-dir", str(tmp_path)]) == 2
        assert "bracket" in capsys.readouterr().err.lower()

    def test_threshold_L_sweep(self, tmp_path):
        assert run(["threshold", "L", "--a", "1.5", "--b", "3.5",
                    "--L-values", "3,8", "--grid-n", "101",
                    "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "threshold_L.json").read_text())
        flags = {L: flag for L, flag in doc["entries"]}
        assert flags == {3.0: False, 8.0: True}
        assert doc["transition"] == [3.0, 8.0]


class TestNumericalFailureExit:
    def test_front_domain_too_small_exits_3(self, tmp_path, capsys):
        code = run(["front", "--a", "1.5", "--b", "3.5", "--half-width", "50",
                    "--t-end", "200", "--out-dir", str(tmp_path)])
        assert code == 3
        assert "numerical failure" in capsys.readouterr().err


class TestVerify:
    def test_sum_roundtrip_through_csv(self, tmp_path, capsys):
        assert run(["simulate", "--config", write_config(tmp_path, sim_config()),
                    "--out-dir", str(tmp_path)]) == 0
        traj = str(tmp_path / "trajectory.csv")
        assert run(["verify", "sum", "--traj", traj, "--out-dir", str(tmp_path)]) == 0
        stdout_doc = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert stdout_doc["pass"] is True
        disk_doc = json.loads((tmp_path / "verify_sum.json").read_text())
        assert disk_doc["check"] == "sum_supersolution"

    def test_comparison_roundtrip(self, tmp_path, capsys):
        lo = sim_config(init={"kind": "constant", "y1": 0.2, "y2": 0.8},
                        controls={
                            "y1_left": {"mode": "dirichlet_const", "value": 0.0},
                            "y1_right": {"mode": "dirichlet_const", "value": 0.0},
                            "y2_left": {"mode": "dirichlet_const", "value": 1.0},
                            "y2_right": {"mode": "dirichlet_const", "value": 1.0},
                        })
        hi = sim_config(init={"kind": "constant", "y1": 0.8, "y2": 0.2})
        d_lo, d_hi = tmp_path / "lo", tmp_path / "hi"
        assert run(["simulate", "--config", write_config(tmp_path, lo, "lo.json"),
                    "--out-dir", str(d_lo)]) == 0
        assert run(["simulate", "--config", write_config(tmp_path, hi, "hi.json"),
                    "--out-dir", str(d_hi)]) == 0
        assert run(["verify", "comparison", "--sub", str(d_lo / "trajectory.csv"),
                    "--super", str(d_hi / "trajectory.csv"),
                    "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "verify_comparison.json").read_text())
        assert doc["pass"] is True

    def test_neumann_flags(self, tmp_path, capsys):
        assert run(["verify", "neumann", "--a", "1.5", "--b", "3.5", "--L", "8",
                    "--y1", "0.05", "--y2", "0.8", "--grid-n", "101",
                    "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "verify_neumann.json").read_text())
        assert doc["pass"] is True
        assert doc["worst"]["value"] <= 0.01

    def test_failed_check_still_exits_zero(self, tmp_path, capsys):
        """A check that runs and reports a violation is a successful
        verification run; only broken premises/configs change the exit code."""
        assert run(["verify", "neumann", "--a", "1.5", "--b", "3.5", "--L", "8",
                    "--y1", "0.3", "--y2", "0.2", "--grid-n", "101",
                    "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "verify_neumann.json").read_text())
        assert doc["pass"] is None  # premise N/A, reported, exit still 0


class TestOdeAndOptimize:
    def test_portrait_artifacts(self, tmp_path):
        assert run(["ode", "portrait", "--a", "1.5", "--b", "3.5", "--density", "5",
                    "--out-dir", str(tmp_path)]) == 0
        lines = (tmp_path / "portrait.csv").read_text().splitlines()
        assert lines[0] == "w1_0,w2_0,class"
        assert len(lines) == 26
        doc = json.loads((tmp_path / "portrait_summary.json").read_text())
        labels = {e["label"] for e in doc["equilibria"]}
        assert len(doc["equilibria"]) == 4
        assert "Saddle" in labels

    def test_optimize_artifacts(self, tmp_path, capsys):
        doc = {
            "version": 1,
            "grid": {"L": 4.0, "n": 41},
            "params": {"a": 1.5, "b": 2.6},
            "T": 2.0,
            "n_segments": 2,
            "init": {"kind": "constant", "y1": 1.0, "y2": 0.0},
            "target": {"y1": 0.0, "y2": 1.0},
            "max_iters": 3,
            "gradient": "adjoint",
            "u0": "target",
        }
        assert run(["optimize", "--config", write_config(tmp_path, doc),
                    "--out-dir", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "damped-implicit-Euler" in out
        result = json.loads((tmp_path / "optimize_result.json").read_text())
        assert result["version"] == 1
        assert len(result["J_history"]) >= 1
        controls = (tmp_path / "optimize_controls.csv").read_text().splitlines()
        assert controls[0] == "t_start,t_end,y1_left,y1_right,y2_left,y2_right"
        assert len(controls) == 3
        assert (tmp_path / "optimize_profile.csv").exists()
