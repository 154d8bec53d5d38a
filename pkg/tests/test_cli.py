import json

import numpy as np
import pytest

from jpmsim import analytic
from jpmsim.cli import main
from jpmsim.core import DetectorParams, omega_from_ghz


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestHelp:
    def test_lists_all_subcommands(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0
        for cmd in ("simulate", "compare", "efficiency", "nep", "match",
                    "analytic", "optimize", "sweep"):
            assert cmd in out

    @pytest.mark.parametrize("cmd,flags", [
        ("simulate", ["--drive", "--alpha-sq", "--kappa", "--sigma", "--t0",
                      "--paper-literal", "--pulse-file", "--t-end", "--samples",
                      "--output", "--gamma-tl", "--gamma-0", "--gamma-1",
                      "--gamma-rel", "--freq"]),
        ("compare", ["--alpha-sq", "--t-end", "--samples", "--output"]),
        ("efficiency", ["--ideal", "--n-in", "--gamma-res", "--output"]),
        ("nep", ["--matched", "--gamma-res", "--output"]),
        ("match", ["--gamma-1", "--gamma-0", "--gamma-rel", "--output"]),
        ("analytic", ["--mode", "--alpha-sq", "--kappa", "--order", "--output"]),
        ("optimize", ["--alpha-sq", "--t-m", "--output"]),
        ("sweep", ["--spec", "--format", "--workers", "--output"]),
    ])
    def test_subcommand_help_enumerates_flags(self, capsys, cmd, flags):
        code, out, _ = run(capsys, cmd, "--help")
        assert code == 0
        for flag in flags:
            assert flag in out

    def test_missing_subcommand(self, capsys):
        code, _, _ = run(capsys)
        assert code == 2

    def test_bad_flag(self, capsys):
        code, _, _ = run(capsys, "match", "--bogus")
        assert code == 2


class TestSimulate:
    def test_zero_drive_trajectory(self, capsys, tmp_path):
        out_path = tmp_path / "traj.csv"
        code, out, _ = run(
            capsys, "simulate", "--drive", "continuous", "--alpha-sq", "0",
            "--t-end", "10", "--output", str(out_path),
        )
        assert code == 0
        assert "pm(t_end) = 0.000000" in out
        data = np.genfromtxt(out_path, delimiter=",", names=True)
        assert np.all(data["pm"] == 0.0)

    def test_repeat_invocation_is_deterministic(self, capsys, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            code, _, _ = run(
                capsys, "simulate", "--drive", "continuous",
                "--alpha-sq", "0.05", "--t-end", "10", "--output", str(p),
            )
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_paper_literal_gaussian_differs(self, capsys):
        def pm_for(*extra):
            _, out, _ = run(
                capsys, "simulate", "--drive", "gauss",
                "--alpha-sq", "0.1", "--sigma", "1", *extra,
            )
            return float(out.split("=")[1].split("at")[0])

        pm_norm = pm_for()
        pm_lit = pm_for("--paper-literal")
        # the literal prefactor carries 2 pi times the energy
        assert pm_lit > 2 * pm_norm

    def test_exp_pulse_matches_series(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--drive", "exp",
            "--alpha-sq", "0.15", "--kappa", "5",
        )
        assert code == 0
        pm = float(out.split("=")[1].split("at")[0])
        params = DetectorParams(
            gamma_tl=1.0, gamma_0=0.0, gamma_1=1.0, gamma_rel=0.0,
            gamma_res=0.0, omega_0=omega_from_ghz(5.0),
        )
        series = analytic.exp_pulse_steady_state(params, 0.15, 5.0)
        assert abs(pm - series) < 1e-2


class TestCompare:
    def test_zero_time_agreement_and_header(self, capsys):
        code, out, err = run(
            capsys, "compare", "--alpha-sq", "0.05", "--t-end", "10",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t,pm_meanfield,pm_rate"
        first = lines[1].split(",")
        assert float(first[1]) == 0.0
        assert float(first[2]) == 0.0
        assert "max abs gap" in err

    def test_classical_regime_small_gap(self, capsys):
        # strong incoherent pumping: mean field and rate closed form agree
        code, _, err = run(
            capsys, "compare", "--alpha-sq", "5", "--t-end", "30",
        )
        assert code == 0
        gap = float(err.split("mean abs gap =")[1].strip())
        assert gap < 0.05


class TestEfficiency:
    def test_ideal_symmetric(self, capsys):
        code, out, _ = run(
            capsys, "efficiency", "--ideal", "--gamma-tl", "2", "--gamma-1", "1",
        )
        assert code == 0
        assert float(out) == pytest.approx(8.0 / 9.0, abs=1e-9)

    def test_report_json(self, capsys):
        code, out, _ = run(
            capsys, "efficiency", "--gamma-tl", "1", "--gamma-1", "1",
            "--gamma-res", "100",
        )
        assert code == 0
        data = json.loads(out)
        assert data["eta"] == pytest.approx(1.0, abs=1e-9)


class TestNep:
    def test_reference_point(self, capsys):
        code, out, _ = run(
            capsys, "nep", "--matched", "--gamma-0", "0.01", "--gamma-1", "1",
            "--gamma-rel", "3.3e-5", "--gamma-res", "100",
        )
        assert code == 0
        val = json.loads(out)["nep"]
        assert 1e-20 < val < 3e-20


class TestMatch:
    def test_symmetric_unit(self, capsys):
        code, out, _ = run(capsys, "match", "--gamma-1", "1")
        assert code == 0
        assert float(out) == pytest.approx(1.0, rel=1e-9)


class TestAnalytic:
    def test_poles_json(self, capsys):
        code, out, _ = run(
            capsys, "analytic", "--mode", "poles", "--alpha-sq", "0.1",
        )
        assert code == 0
        data = json.loads(out)
        assert len(data["poles"]) == 4
        assert data["poles"][0] == [0.0, 0.0]
        assert data["residues"][0] == [1.0, 0.0]

    def test_exp_steady_value(self, capsys):
        code, out, _ = run(
            capsys, "analytic", "--mode", "exp-steady",
            "--alpha-sq", "0.15", "--kappa", "5",
        )
        assert code == 0
        params = DetectorParams(
            gamma_tl=1.0, gamma_0=0.0, gamma_1=1.0, gamma_rel=0.0,
            gamma_res=0.0, omega_0=omega_from_ghz(5.0),
        )
        assert float(out) == pytest.approx(
            analytic.exp_pulse_steady_state(params, 0.15, 5.0), rel=1e-6)


class TestOptimize:
    def test_result_fields(self, capsys):
        code, out, _ = run(
            capsys, "optimize", "--alpha-sq", "0.02", "--t-m", "50",
        )
        assert code == 0
        data = json.loads(out)
        assert not data["at_boundary"]
        assert data["gamma_tl_max"] > 0
        assert 0 < data["pm"] <= 1


class TestSweep:
    def test_csv_output(self, capsys, tmp_path):
        spec = {
            "axis1": {"name": "gamma_tl", "min": 0.5, "max": 2.0, "points": 3},
            "objective": "eta",
            "params": {"gamma_1": 1.0, "gamma_res": 100.0},
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        out_path = tmp_path / "out.csv"
        code, out, _ = run(
            capsys, "sweep", "--spec", str(spec_path),
            "--output", str(out_path),
        )
        assert code == 0
        rows = out_path.read_text().strip().splitlines()
        assert rows[0] == "gamma_tl,eta"
        assert len(rows) == 4

    def test_json_output_parallel(self, capsys, tmp_path):
        spec = {
            "axis1": {"name": "alpha_sq", "min": 0.01, "max": 0.1, "points": 3},
            "objective": "pm_at_tm",
            "t_m": 5.0,
            "params": {},
            "drive": {"kind": "continuous", "alpha_sq": 0.0},
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        code, out, _ = run(
            capsys, "sweep", "--spec", str(spec_path),
            "--format", "json", "--workers", "4",
        )
        assert code == 0
        data = json.loads(out)
        assert len(data["values"]) == 3
        assert data["failed_cells"] == []

    def test_unknown_spec_key(self, capsys, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({"axes": []}))
        with pytest.raises(SystemExit):
            main(["sweep", "--spec", str(spec_path)])


class TestConfig:
    def test_defaults_and_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"gamma_1": 4.0}))
        code, out, _ = run(capsys, "--config", str(cfg), "match")
        assert code == 0
        assert float(out) == pytest.approx(4.0, rel=1e-9)
        code, out, _ = run(
            capsys, "--config", str(cfg), "match", "--gamma-1", "9.0",
        )
        assert code == 0
        assert float(out) == pytest.approx(9.0, rel=1e-9)

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"not_a_flag": 1}))
        assert main(["--config", str(cfg), "match"]) == 2
