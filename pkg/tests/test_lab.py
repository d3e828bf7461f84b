import json
import math

import pytest

from tunnellab.cli import main
from tunnellab.lab import (
    ConfigError,
    ScenarioError,
    emit_tables,
    parse_config,
    run_scenario,
)


class TestParseConfig:
    def test_minimal_defaults(self):
        spec = parse_config("{}", scenario="table1")
        assert spec.name == "table1"
        assert spec.config["k0a"] == 1.0
        assert spec.config["wa_values"] == [1.5, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0]

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="unknown top-level"):
            parse_config('{"bogus": 1}', scenario="table1")

    def test_unknown_config_key(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            parse_config('{"config": {"not_a_key": 1}}', scenario="table1")

    def test_parse_error_carries_position(self):
        with pytest.raises(ConfigError, match="line 1, column"):
            parse_config('{"config": }', scenario="table1")

    def test_negative_width_rejected(self):
        with pytest.raises(ConfigError):
            parse_config('{"config": {"a": -1.0}}', scenario="free-packet")

    def test_sweep_bounds_ordered(self):
        with pytest.raises(ConfigError, match="min < max"):
            parse_config('{"sweep": {"parameter": "alpha", "min": 2, "max": 1, "steps": 5}}',
                         scenario="nr-phase")

    def test_sweep_steps_minimum(self):
        with pytest.raises(ConfigError, match="steps"):
            parse_config('{"sweep": {"parameter": "alpha", "min": 1, "max": 2, "steps": 1}}',
                         scenario="nr-phase")

    def test_sweep_parameter_checked(self):
        with pytest.raises(ConfigError, match="sweeps over"):
            parse_config('{"sweep": {"parameter": "beta", "min": 1, "max": 2, "steps": 5}}',
                         scenario="nr-phase")
        with pytest.raises(ConfigError, match="does not accept"):
            parse_config('{"sweep": {"parameter": "alpha", "min": 1, "max": 2, "steps": 5}}',
                         scenario="table1")

    def test_scenario_mismatch(self):
        with pytest.raises(ConfigError, match="requested"):
            parse_config('{"scenario": "table1"}', scenario="hartman")

    def test_unknown_scenario(self):
        with pytest.raises(ScenarioError, match="unknown scenario"):
            parse_config("{}", scenario="frobnicate")


class TestRunScenarios:
    def test_table1_cells(self):
        spec = parse_config(json.dumps({
            "config": {"wa_values": [1.5, 4.0], "L_over_a_min": 0.2,
                       "L_over_a_max": 0.2, "L_over_a_step": 0.05},
        }), scenario="table1")
        (table,) = run_scenario(spec)
        cells = {(row[0], row[1]): row[2] for row in table.rows}
        assert cells[(4.0, 0.2)] == pytest.approx(1.6571, abs=5e-4)
        assert cells[(1.5, 0.2)] == pytest.approx(1.0794, abs=5e-4)

    def test_table1_distorted_cell_is_star(self):
        spec = parse_config(json.dumps({
            "config": {"wa_values": [1.5], "L_over_a_min": 0.8,
                       "L_over_a_max": 0.8, "L_over_a_step": 0.05},
        }), scenario="table1")
        (table,) = run_scenario(spec)
        assert table.rows[0][2] == "*"

    def test_threads_do_not_change_results(self):
        spec = parse_config(json.dumps({
            "config": {"wa_values": [2.0, 6.0], "L_over_a_min": 0.0,
                       "L_over_a_max": 0.3, "L_over_a_step": 0.1},
        }), scenario="table1")
        (serial,) = run_scenario(spec, threads=1)
        (parallel,) = run_scenario(spec, threads=4)
        assert serial.rows == parallel.rows

    def test_symmetric_identity_column_zero(self):
        spec = parse_config('{"config": {"n_steps": 11}}', scenario="symmetric-times")
        (table,) = run_scenario(spec)
        cols = {name: i for i, name in enumerate(table.columns)}
        for row in table.rows:
            assert abs(row[cols["identity_plus"]]) < 1e-12
            assert abs(row[cols["identity_minus"]]) < 1e-12

    def test_relativistic_curves_finite(self):
        spec = parse_config(json.dumps({
            "config": {"upsilon_values": [0.0, 5.0], "n_sq_steps": 21},
        }), scenario="relativistic-times")
        (table,) = run_scenario(spec)
        cols = {name: i for i, name in enumerate(table.columns)}
        assert len(table.rows) > 0
        for row in table.rows:
            assert math.isfinite(row[cols["t_phase"]])
            assert 0.0 < row[cols["T_sq"]] <= 1.0
            if row[cols["upsilon"]] > 0.0:
                assert abs(row[cols["identity_residual"]]) < 1e-8

    def test_provenance_echoes_config(self):
        spec = parse_config('{"config": {"n_steps": 5}}', scenario="symmetric-times")
        (table,) = run_scenario(spec)
        assert table.provenance["scenario"] == "symmetric-times"
        assert table.provenance["config.n_steps"] == 5
        assert "version" in table.provenance

    def test_free_packet_sweep(self):
        spec = parse_config(json.dumps({
            "sweep": {"parameter": "t", "min": 0.0, "max": 2.0, "steps": 5},
            "config": {"n_x": 501},
        }), scenario="free-packet")
        (table,) = run_scenario(spec)
        assert len(table.rows) == 5
        for row in table.rows:
            assert row[3] == pytest.approx(1.0, abs=1e-6)


class TestEmission:
    def _tables(self):
        spec = parse_config('{"config": {"n_steps": 7}}', scenario="symmetric-times")
        return run_scenario(spec)

    def test_byte_identical_reruns(self, tmp_path):
        tables = self._tables()
        p1 = emit_tables(tables, str(tmp_path / "a"), timestamp=None)
        p2 = emit_tables(self._tables(), str(tmp_path / "b"), timestamp=None)
        assert p1[0].read_bytes() == p2[0].read_bytes()

    def test_timestamp_line_only_difference(self, tmp_path):
        tables = self._tables()
        emit_tables(tables, str(tmp_path / "with"), timestamp="2026-01-01T00:00:00Z")
        emit_tables(tables, str(tmp_path / "without"), timestamp=None)
        with_lines = (tmp_path / "with_symmetric_times.csv").read_text().splitlines()
        without_lines = (tmp_path / "without_symmetric_times.csv").read_text().splitlines()
        assert [l for l in with_lines if not l.startswith("# generated_at")] == without_lines

    def test_provenance_header_format(self, tmp_path):
        emit_tables(self._tables(), str(tmp_path / "out"), timestamp=None)
        text = (tmp_path / "out_symmetric_times.csv").read_text()
        header = [l for l in text.splitlines() if l.startswith("#")]
        assert any(l.startswith("# scenario = ") for l in header)
        assert any(l.startswith("# config.wL = ") for l in header)
        assert any(l.startswith("# version = ") for l in header)

    def test_json_mirror(self, tmp_path):
        paths = emit_tables(self._tables(), str(tmp_path / "out"), json_mirror=True,
                            timestamp=None)
        jpath = [p for p in paths if p.suffix == ".json"][0]
        payload = json.loads(jpath.read_text())
        assert payload["columns"][0] == "n"
        assert len(payload["rows"]) == 7


class TestCli:
    def test_list(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for name in ("table1", "confront", "hartman"):
            assert name in out

    def test_run_ok(self, tmp_path, capsys):
        code = main(["run", "symmetric-times", "--out", str(tmp_path / "sym"),
                     "--no-timestamp"])
        assert code == 0
        assert (tmp_path / "sym_symmetric_times.csv").exists()

    def test_unknown_scenario_exit_code(self, capsys):
        assert main(["run", "frobnicate"]) == 3

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"config": {"nope": 1}}')
        assert main(["run", "table1", "--config", str(bad)]) == 2

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["run", "table1", "--config", str(bad)]) == 2

    def test_io_error_exit_code(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("a file, not a directory")
        code = main(["run", "symmetric-times", "--out", str(blocker / "sub" / "x"),
                     "--no-timestamp"])
        assert code == 4

    def test_missing_config_file(self, capsys):
        assert main(["run", "table1", "--config", "/nonexistent/path.json"]) == 4
