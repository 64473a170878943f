import json
import math
from pathlib import Path

import pytest

from nli_coherence import cli

CONFIG_DIR = Path(__file__).resolve().parents[1] / "demos" / "configs"


def write_config(tmp_path, overrides=None, **top):
    cfg = {
        "schema": 1,
        "scenario": "test",
        "link": {"n_spans": 3, "span": {"length_km": 100.0, "loss_db_per_km": 0.2,
                                        "beta2_ps2_per_km": 21.0,
                                        "gamma_per_w_km": 1.3}},
        "signal": {"g0_w_per_thz": 0.03125, "bandwidth_thz": 0.032},
        "methods": ["sinint"],
    }
    cfg.update(top)
    if overrides:
        for dotted, value in overrides.items():
            node = cfg
            *parents, leaf = dotted.split(".")
            for p in parents:
                node = node[p]
            if value is None:
                node.pop(leaf, None)
            else:
                node[leaf] = value
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


class TestLoadConfig:
    def test_smf_example_loads(self):
        cfg = cli.load_config(str(CONFIG_DIR / "smf.json"))
        assert cfg.link.n_spans == 10
        span = cfg.link.spans[0]
        xi = (math.pi**2 * span.beta2_ps2_per_km * span.length_km
              * cfg.signal.bandwidth_thz**2)
        assert xi == pytest.approx(21.2, rel=0.01)
        # 0 dBm over 32 GHz
        assert cfg.signal.g0_w_per_thz == pytest.approx(1e-3 / 0.032, rel=1e-12)

    def test_unit_boundary_equivalence(self, tmp_path):
        a = cli.load_config(write_config(tmp_path))
        b = cli.load_config(write_config(
            tmp_path, overrides={"signal.bandwidth_thz": None,
                                 "signal.bandwidth_gbaud": 32.0}))
        assert a.signal == b.signal

    def test_missing_bandwidth_named(self, tmp_path):
        path = write_config(tmp_path, overrides={"signal.bandwidth_thz": None})
        with pytest.raises(cli.ConfigError, match="signal"):
            cli.load_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, overrides={"signal.chirp": 1.0})
        with pytest.raises(cli.ConfigError, match="chirp"):
            cli.load_config(path)

    def test_heterogeneous_round_trip(self):
        cfg = cli.load_config(str(CONFIG_DIR / "heterogeneous.json"))
        assert cfg.link.n_spans == 3
        assert not cfg.link.is_homogeneous

    def test_heterogeneous_rejects_homogeneous_methods(self, tmp_path):
        path = write_config(tmp_path, overrides={
            "link.n_spans": None, "link.span": None,
            "link.spans": [
                {"length_km": 100.0, "loss_db_per_km": 0.2,
                 "beta2_ps2_per_km": 21.0, "gamma_per_w_km": 1.3},
                {"length_km": 80.0, "loss_db_per_km": 0.2,
                 "beta2_ps2_per_km": 21.0, "gamma_per_w_km": 1.3}]})
        with pytest.raises(cli.ConfigError, match="homogeneous"):
            cli.load_config(path)

    def test_bad_schema(self, tmp_path):
        path = write_config(tmp_path, schema=2)
        with pytest.raises(cli.ConfigError, match="schema"):
            cli.load_config(path)

    def test_unknown_method_tag(self, tmp_path):
        path = write_config(tmp_path, methods=["sinint", "magic"])
        with pytest.raises(cli.ConfigError, match="magic"):
            cli.load_config(path)


class TestRunCompare:
    def test_single_span_no_correction(self, tmp_path):
        cfg = cli.load_config(write_config(
            tmp_path, overrides={"link.n_spans": 1}))
        rows = cli.run_compare(cfg)
        assert len(rows) == 1
        assert rows[0].g_cc == 0.0

    def test_reference_row_zero_db(self, tmp_path):
        cfg = cli.load_config(write_config(
            tmp_path, methods=["sinint", "lower-bound"],
            reference_method="sinint"))
        rows = cli.run_compare(cfg)
        assert rows[0].delta_db_vs_ref == 0.0
        assert rows[1].delta_db_vs_ref < 0.0

    def test_oracle_vs_exact_series_agree(self, tmp_path):
        cfg = cli.load_config(write_config(
            tmp_path, methods=["oracle-square", "exact-series"]))
        rows = cli.run_compare(cfg)
        by_method = {r.method: r for r in rows}
        a = by_method["oracle-square"].total
        b = by_method["exact-series"].total
        assert a == pytest.approx(b, rel=1e-8)

    def test_sweep_row_order(self, tmp_path):
        cfg = cli.load_config(write_config(
            tmp_path, methods=["sinint", "siapp"],
            sweep={"axis": "n_spans", "values": [2, 4]}))
        rows = cli.run_compare(cfg)
        assert [(r.sweep_value, r.method) for r in rows] == [
            ("2", "sinint"), ("2", "siapp"), ("4", "sinint"), ("4", "siapp")]

    def test_threaded_matches_serial(self, tmp_path):
        cfg = cli.load_config(write_config(
            tmp_path, methods=["sinint", "lower-bound"],
            sweep={"axis": "bandwidth", "values": [0.016, 0.032, 0.064]}))
        serial = cli.run_compare(cfg, threads=1)
        threaded = cli.run_compare(cfg, threads=4)
        assert serial == threaded


class TestEmitAndMain:
    def test_csv_shape(self, tmp_path, capsys):
        path = write_config(tmp_path, methods=["sinint", "plateau"])
        assert cli.main(["compare", "--config", path]) == 0
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert lines[0].strip() == ",".join(cli.CSV_HEADER)
        assert len(lines) == 3

    def test_evaluate_uses_first_method(self, tmp_path, capsys):
        path = write_config(tmp_path, methods=["siapp", "sinint"])
        assert cli.main(["evaluate", "--config", path]) == 0
        out = capsys.readouterr().out
        assert "siapp" in out and "sinint" not in out

    def test_sweep_verb_requires_sweep(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.main(["sweep", "--config", path]) == 1

    def test_missing_file(self):
        assert cli.main(["compare", "--config", "/nonexistent.json"]) == 1

    def test_out_file_written(self, tmp_path):
        path = write_config(tmp_path)
        out = tmp_path / "rows.csv"
        assert cli.main(["compare", "--config", path, "--out", str(out)]) == 0
        text = out.read_bytes()
        assert text.startswith(b"scenario,method")
        assert text.count(b"\r\n") == 2

    def test_required_method_budget_exit_code(self, tmp_path):
        path = write_config(
            tmp_path, methods=["exact-series"],
            required_methods=["exact-series"],
            quadrature={"rel_tol": 1e-14, "max_evals": 1000})
        assert cli.main(["compare", "--config", path]) == 2

    def test_ref_method_override(self, tmp_path, capsys):
        path = write_config(tmp_path, methods=["sinint", "siapp"])
        assert cli.main(["compare", "--config", path,
                         "--ref-method", "siapp"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        siapp_row = [l for l in lines if ",siapp," in l][0]
        assert siapp_row.split(",")[7] == "0.0"

    def test_selftest(self, capsys):
        assert cli.main(["selftest"]) == 0
        assert "4/4" in capsys.readouterr().out
