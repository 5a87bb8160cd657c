"""Sweep engine, threshold bisection, table formats, CLI contract."""

import json
import math

import numpy as np
import pytest

from ptbilayer import media, noise, sweep_cli
from ptbilayer.sweep_cli import (
    ConfigError,
    NoSignChange,
    SweepSpec,
    ThresholdQuery,
    cli_main,
    compare_theories,
    grid_values,
    locate_threshold,
    run_sweep,
)


def spec(**kw):
    base = dict(preset="set1", variable="alpha_l", start=1.0, stop=1000.0,
                count=40, spacing="log", fixed_omega_trad=1000.0,
                observables=("scattering",), reproducible=True)
    base.update(kw)
    return SweepSpec(**base)


class TestGrid:
    def test_log_spacing(self):
        xs = grid_values(spec(count=4))
        np.testing.assert_allclose(xs, [1.0, 10.0, 100.0, 1000.0], rtol=1e-12)

    def test_linear_spacing(self):
        xs = grid_values(spec(spacing="linear", count=5, start=0.0, stop=8.0))
        np.testing.assert_allclose(xs, [0, 2, 4, 6, 8], atol=1e-12)

    def test_auto_spacing_rules(self):
        # two decades of loss amplitude default to log, narrow spans to linear
        assert grid_values(spec(spacing=None, count=3))[1] == pytest.approx(
            math.sqrt(1000.0))
        xs = grid_values(spec(spacing=None, start=10.0, stop=20.0, count=3))
        assert xs[1] == pytest.approx(15.0)

    def test_validation(self):
        with pytest.raises(ConfigError):
            spec(count=1).validate()
        with pytest.raises(ConfigError):
            spec(start=5.0, stop=5.0).validate()
        with pytest.raises(ConfigError):
            spec(spacing="log", start=-1.0).validate()
        with pytest.raises(ConfigError):
            spec(observables=("spin",)).validate()
        with pytest.raises(ConfigError):
            spec(variable="phase").validate()
        with pytest.raises(ConfigError):
            spec(mode="paper", check_sum_rule=True).validate()


class TestRunSweep:
    def test_row_per_grid_point_in_order(self):
        table = run_sweep(spec(count=17))
        assert len(table.rows) == 17
        col = table.column("alpha_l")
        assert col == sorted(col)
        assert col[0] == pytest.approx(1.0)
        assert col[-1] == pytest.approx(1000.0)

    def test_status_column_is_last_and_ok(self):
        table = run_sweep(spec(count=5))
        assert table.columns[-1] == "status"
        assert all(row[-1] == "ok" for row in table.rows)

    def test_eigenvalue_columns(self):
        table = run_sweep(spec(observables=("eigenvalues",), count=9))
        assert table.column("phase_class")[0] == "exact"
        assert table.column("phase_class")[-1] == "broken"
        dev = table.column("unimodularity_dev")
        assert max(dev[:4]) < 1e-8

    def test_error_rows_are_recorded_not_fatal(self):
        table = run_sweep(spec(observables=("eta",), start=400.0,
                               stop=1000.0, count=4, spacing="linear",
                               thickness_nm=2000.0))
        statuses = table.column("status")
        assert "BranchAmbiguity" in statuses
        idx = statuses.index("BranchAmbiguity")
        assert math.isnan(table.rows[idx][table.columns.index("eta_mod")])

    def test_deterministic_tables(self):
        a = run_sweep(spec(count=12,
                           observables=("scattering", "noise", "variance")))
        b = run_sweep(spec(count=12,
                           observables=("scattering", "noise", "variance")))
        assert a.to_csv_text() == b.to_csv_text()
        assert json.dumps(a.to_json_obj()) == json.dumps(b.to_json_obj())

    def test_temperature_sweep(self):
        table = run_sweep(spec(variable="temperature", start=0.0, stop=300.0,
                               count=3, spacing="linear", fixed_alpha_l=50.0,
                               observables=("noise",)))
        s = table.column("s_right")
        assert abs(s[2] - s[0]) < 1e-9  # optical frequency: thermal part dead

    def test_omega_sweep_columns(self):
        table = run_sweep(spec(variable="omega", start=500.0, stop=1500.0,
                               count=7, spacing="linear", fixed_alpha_l=24.0,
                               observables=("variance",)))
        assert table.columns[0] == "omega_trad"
        assert all(np.isfinite(table.column("variance")))


class TestFormats:
    def test_csv_shape(self):
        text = run_sweep(spec(count=6)).to_csv_text()
        lines = text.split("\n")
        assert lines[-1] == ""  # trailing newline
        assert "\r" not in text
        rows = [ln.split(",") for ln in lines[:-1]]
        assert len(rows) == 7
        assert all(len(r) == len(rows[0]) for r in rows)
        assert rows[0][-1] == "status"

    def test_csv_floats_round_trip(self):
        table = run_sweep(spec(count=6, observables=("scattering", "noise")))
        lines = table.to_csv_text().split("\n")[1:-1]
        i_t = table.columns.index("T")
        for line, row in zip(lines, table.rows):
            assert float(line.split(",")[i_t]) == row[i_t]  # 17 sig digits

    def test_json_nan_becomes_null(self):
        table = run_sweep(spec(observables=("eta",), start=400.0, stop=1000.0,
                               count=3, spacing="linear",
                               thickness_nm=2000.0))
        obj = json.loads(json.dumps(table.to_json_obj()))
        flat = [c for row in obj["rows"] for c in row]
        assert None in flat

    def test_metadata_reproducible(self):
        meta = run_sweep(spec(count=3)).metadata
        assert "timestamp" not in meta
        assert meta["mode"] == "full_complex"
        assert meta["grid"]["count"] == 3
        meta2 = run_sweep(spec(count=3, reproducible=False)).metadata
        assert "timestamp" in meta2


class TestCompare:
    def test_effective_columns_present(self):
        table = compare_theories(spec(count=6, stop=100.0,
                                      observables=("variance", "mandel")))
        v = np.array(table.column("variance"))
        ve = np.array(table.column("variance_effective"))
        rd = np.array(table.column("variance_rel_dev"))
        np.testing.assert_allclose(rd, np.abs(ve - v) / np.abs(v), rtol=1e-12)
        assert max(rd) < 0.10  # moderate coupling: theories track each other
        assert "mandel_q_rel_dev" in table.columns


class TestLocate:
    def test_transparency_crossings(self):
        # T crosses unity twice below the coalescence point
        lo = locate_threshold(ThresholdQuery("atr", (10.0, 40.0)), spec())
        hi = locate_threshold(ThresholdQuery("atr", (100.0, 130.0)), spec())
        assert lo == pytest.approx(23.7, abs=1.0)
        assert hi == pytest.approx(113.6, abs=2.0)

    def test_reflection_degeneracy(self):
        x = locate_threshold(ThresholdQuery("accidental_degeneracy",
                                            (30.0, 80.0)), spec())
        assert x == pytest.approx(51.9, abs=1.5)

    def test_eigenvalue_coalescence(self):
        x = locate_threshold(ThresholdQuery("exceptional_point",
                                            (800.0, 1000.0)), spec())
        assert x == pytest.approx(889.7, abs=1.5)

    def test_round_trip_unity(self):
        x = locate_threshold(ThresholdQuery("eta_unity", (100.0, 200.0)),
                             spec(observables=("eta",)))
        assert x == pytest.approx(146.9, abs=0.5)

    def test_mandel_crossing(self):
        x = locate_threshold(ThresholdQuery("mandel_crossing", (1.0, 10.0)),
                             spec())
        assert x == pytest.approx(4.89, abs=0.05)

    def test_squeeze_crossing_in_frequency(self):
        # variance returns to shot noise below the operating frequency
        x = locate_threshold(
            ThresholdQuery("squeeze_crossing", (500.0, 900.0)),
            spec(variable="omega", fixed_alpha_l=24.0))
        assert x == pytest.approx(722.2, abs=5.0)

    def test_result_brackets_sign_change(self):
        q = ThresholdQuery("atr", (10.0, 40.0), tol=1e-12)
        x = locate_threshold(q, spec())
        f = sweep_cli._threshold_scalar(spec(), "atr")
        assert f(x - 1e-6) * f(x + 1e-6) < 0

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange):
            locate_threshold(ThresholdQuery("atr", (1.0, 10.0)), spec())

    def test_bad_bracket(self):
        with pytest.raises(ConfigError):
            locate_threshold(ThresholdQuery("atr", (40.0, 10.0)), spec())
        with pytest.raises(ConfigError):
            locate_threshold(ThresholdQuery("windmill", (1.0, 2.0)), spec())


class TestCli:
    def test_sweep_writes_csv(self, tmp_path):
        out = tmp_path / "fig3a.csv"
        rc = cli_main(["sweep", "--preset", "set1", "--var", "alpha_l",
                       "--range", "1:1000:12", "--log",
                       "--omega-trad", "1000", "--obs", "eigenvalues",
                       "--out", str(out), "--reproducible"])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 13
        assert lines[0].startswith("alpha_l,lambda1_mod")

    def test_sweep_stdout_json(self, capsys):
        rc = cli_main(["sweep", "--preset", "set2", "--var", "alpha_l",
                       "--range", "1:10:3", "--linear", "--obs", "variance",
                       "--format", "json", "--reproducible"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["metadata"]["preset"] == "set2"
        assert len(obj["rows"]) == 3

    def test_pt_solve_values(self, capsys):
        rc = cli_main(["pt-solve", "--preset", "set2", "--alpha-l", "2"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["omega_pt_over_omega0_gain"] == pytest.approx(1.5768,
                                                                 abs=1e-3)
        assert obj["alpha_gain_abs"] == pytest.approx(20.346, abs=0.01)
        assert obj["background_delta_eps"] == pytest.approx(1.22, abs=1e-9)
        assert obj["balanced"] is True

    def test_pt_solve_first_set(self, capsys):
        rc = cli_main(["pt-solve", "--preset", "set1", "--alpha-l", "7"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["omega_pt_over_omega0_gain"] == 1.0
        assert obj["alpha_gain"] == pytest.approx(-7.0, rel=1e-12)

    def test_locate_command(self, capsys):
        rc = cli_main(["locate", "--kind", "exceptional_point", "--preset",
                       "set1", "--bracket", "800:1000",
                       "--omega-trad", "1000"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["abscissa"] == pytest.approx(889.7, abs=1.5)

    def test_presets_listing(self, capsys):
        rc = cli_main(["presets"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert set(obj) == {"set1", "set2"}
        assert obj["set2"]["loss"]["eps_b"] == 3.22
        assert obj["set1"]["layer_thickness_nm"] == pytest.approx(10.0)

    def test_config_file(self, tmp_path, capsys):
        cfg = {"preset": "set1",
               "sweep": {"variable": "alpha_l", "start": 1, "stop": 100,
                         "count": 4, "spacing": "log"},
               "fixed": {"omega_trad": 1000.0},
               "observables": ["noise"]}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        rc = cli_main(["sweep", "--config", str(path), "--format", "json",
                       "--reproducible"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["columns"][:2] == ["alpha_l", "s_right"]
        assert len(obj["rows"]) == 4

    def test_cli_overrides_config(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"preset": "set1"}))
        rc = cli_main(["sweep", "--config", str(path), "--preset", "set2",
                       "--range", "1:5:2", "--linear", "--obs", "scattering",
                       "--format", "json", "--reproducible"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["metadata"]["preset"] == "set2"

    def test_config_error_exit_code(self, capsys):
        assert cli_main(["sweep", "--preset", "set1", "--range", "9:1:5"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_unknown_config_key_exit_code(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"presets": "set1"}))
        assert cli_main(["sweep", "--config", str(path)]) == 2

    def test_no_sign_change_exit_code(self, capsys):
        rc = cli_main(["locate", "--kind", "atr", "--preset", "set2",
                       "--bracket", "1:1000"])
        assert rc == 3
        assert "no sign change" in capsys.readouterr().err

    def test_sum_rule_breach_exit_code(self, monkeypatch, capsys):
        monkeypatch.setattr(noise, "sum_rule_residual", lambda *a, **k: 1.0)
        rc = cli_main(["sweep", "--preset", "set1", "--range", "1:10:3",
                       "--linear", "--obs", "noise", "--check"])
        assert rc == 4
        assert "consistency" in capsys.readouterr().err

    def test_check_with_paper_mode_is_config_error(self):
        rc = cli_main(["sweep", "--preset", "set1", "--range", "1:10:3",
                       "--linear", "--obs", "noise", "--check",
                       "--mode", "paper"])
        assert rc == 2

    def test_paper_mode_sweep_runs(self, capsys):
        rc = cli_main(["sweep", "--preset", "set1", "--range", "1:10:3",
                       "--linear", "--obs", "scattering", "--mode", "paper",
                       "--format", "json", "--reproducible"])
        assert rc == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["metadata"]["mode"] == "paper_real_part"
