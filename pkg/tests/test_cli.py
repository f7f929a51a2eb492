import json

import pytest

from memsense.cli import main, parse_config_file


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSweepCommand:
    def test_prints_csv_by_default(self, capsys):
        code, out, _ = run(capsys, "sweep")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "v_in,v_a,v_o_ron,v_o_roff"
        assert len(lines) == 12

    def test_writes_csv_and_figure(self, capsys, tmp_path):
        code, _, _ = run(capsys, "sweep", "--out", str(tmp_path))
        assert code == 0
        assert (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "sweep.png").exists()

    def test_rejects_single_point(self, capsys):
        code, _, err = run(capsys, "sweep", "--points", "1")
        assert code == 2
        assert err.startswith("error:")


class TestReportCommand:
    def test_both_architectures_by_default(self, capsys):
        code, out, _ = run(capsys, "report", "--rows", "64", "--cols", "64")
        assert code == 0
        assert "parallel" in out
        assert "column" in out
        assert "98.4375" in out

    def test_single_architecture(self, capsys):
        code, out, _ = run(capsys, "report", "--arch", "column", "--rows", "4", "--cols", "4")
        assert code == 0
        assert "parallel" not in out.split("{")[0]

    def test_json_document_included(self, capsys):
        _, out, _ = run(capsys, "report")
        payload = out[out.index("{") :]
        doc = json.loads(payload)
        assert doc["schema_version"] == "1"
        assert len(doc["reports"]) == 2

    def test_out_directory(self, capsys, tmp_path):
        code, _, _ = run(capsys, "report", "--out", str(tmp_path))
        assert code == 0
        assert (tmp_path / "costs.json").exists()
        assert (tmp_path / "costs.png").exists()


class TestSimulateCommand:
    def test_requires_out(self, capsys):
        code, _, err = run(capsys, "simulate")
        assert code == 2
        assert "out" in err

    def test_synthetic_run(self, capsys, tmp_path):
        code, out, _ = run(capsys, "simulate", "--seed", "3", "--out", str(tmp_path / "r"))
        assert code == 0
        assert "mean IoU 1.0000" in out
        summary = json.loads((tmp_path / "r" / "summary.json").read_text())
        assert summary["seed"] == 3
        assert summary["source"] == "synthetic"

    def test_file_inputs(self, capsys, tmp_path):
        code, _, _ = run(
            capsys,
            "scene",
            "--rows", "24", "--cols", "24",
            "--object-rows", "6", "--object-cols", "6",
            "--start-row", "9", "--start-col", "2",
            "--frames", "5",
            "--out", str(tmp_path / "sc"),
        )
        assert code == 0
        frames = sorted(str(p) for p in (tmp_path / "sc").glob("frame_*.pgm"))
        assert len(frames) == 5
        code, out, _ = run(
            capsys, "simulate", "--input", *frames, "--out", str(tmp_path / "run")
        )
        assert code == 0
        assert "metrics skipped" in out
        summary = json.loads((tmp_path / "run" / "summary.json").read_text())
        assert summary["source"] == "files"
        assert summary["rows"] == 24

    def test_invalid_variation_reports_error(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "simulate", "--variation", "1.5", "--out", str(tmp_path)
        )
        assert code == 2
        assert err.startswith("error:")

    def test_bad_arch_choice_exits_nonzero(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--arch", "diagonal", "--out", str(tmp_path)])
        assert exc.value.code == 2


class TestSeedPrecedence:
    def seed_of(self, path):
        return json.loads((path / "summary.json").read_text())["seed"]

    def test_env_var_fallback(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MEMSENSE_SEED", "77")
        run(capsys, "simulate", "--out", str(tmp_path / "a"))
        assert self.seed_of(tmp_path / "a") == 77

    def test_config_file_beats_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MEMSENSE_SEED", "77")
        cfg = tmp_path / "run.cfg"
        cfg.write_text("seed = 5\n")
        run(capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "b"))
        assert self.seed_of(tmp_path / "b") == 5

    def test_flag_beats_config_file(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MEMSENSE_SEED", "77")
        cfg = tmp_path / "run.cfg"
        cfg.write_text("seed = 5\n")
        run(
            capsys,
            "simulate",
            "--config", str(cfg),
            "--seed", "1",
            "--out", str(tmp_path / "c"),
        )
        assert self.seed_of(tmp_path / "c") == 1

    def test_invalid_env_seed(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MEMSENSE_SEED", "lots")
        code, _, err = run(capsys, "simulate", "--out", str(tmp_path / "d"))
        assert code == 2
        assert "MEMSENSE_SEED" in err


class TestConfigFile:
    def test_parses_values_and_comments(self, tmp_path):
        cfg = tmp_path / "a.cfg"
        cfg.write_text(
            "# settings\n"
            "rows = 32\n"
            "cols = 32   # square\n"
            "\n"
            "filter = median3\n"
        )
        assert parse_config_file(cfg) == {
            "rows": "32",
            "cols": "32",
            "filter": "median3",
        }

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "b.cfg"
        cfg.write_text("speed = 11\n")
        with pytest.raises(ValueError) as err:
            parse_config_file(cfg)
        assert "speed" in str(err.value)

    def test_malformed_line_rejected(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("rows\n")
        with pytest.raises(ValueError):
            parse_config_file(cfg)

    def test_config_drives_simulation(self, capsys, tmp_path):
        cfg = tmp_path / "d.cfg"
        cfg.write_text("variation = 0.3\nseed = 6\nfilter = median3\n")
        code, _, _ = run(
            capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "out")
        )
        assert code == 0
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["variation"] == 0.3
        assert summary["seed"] == 6
        assert summary["filter"] == "median3"

    def test_bad_filter_value(self, capsys, tmp_path):
        cfg = tmp_path / "e.cfg"
        cfg.write_text("filter = blur\n")
        code, _, err = run(
            capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "out")
        )
        assert code == 2
        assert "filter" in err


class TestSceneCommand:
    def test_requires_out(self, capsys):
        code, _, err = run(capsys, "scene")
        assert code == 2
        assert "out" in err

    def test_writes_frames_and_truth(self, capsys, tmp_path):
        code, out, _ = run(capsys, "scene", "--out", str(tmp_path))
        assert code == 0
        assert len(list(tmp_path.glob("frame_*.pgm"))) == 10
        assert len(list(tmp_path.glob("gt_*.pgm"))) == 9
        assert "10 frames" in out

    def test_impossible_scene_reports_error(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "scene",
            "--rows", "16", "--cols", "16",
            "--out", str(tmp_path),
        )
        assert code == 2
        assert err.startswith("error:")


class TestMonteCarloCommand:
    def test_writes_aggregate_outputs(self, capsys, tmp_path):
        code, out, _ = run(
            capsys,
            "montecarlo",
            "--variations", "0.1,0.5",
            "--seeds", "2",
            "--out", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "montecarlo.csv").exists()
        assert (tmp_path / "montecarlo.json").exists()
        assert (tmp_path / "iou_vs_variation.png").exists()
        assert "p=0.10" in out
        doc = json.loads((tmp_path / "montecarlo.json").read_text())
        assert doc["n_seeds"] == 2

    def test_filter_none_rejected(self, capsys):
        code, _, err = run(capsys, "montecarlo", "--filter", "none", "--seeds", "1")
        assert code == 2
        assert "median" in err

    def test_runs_without_out_dir(self, capsys):
        code, out, _ = run(
            capsys, "montecarlo", "--variations", "0.2", "--seeds", "1"
        )
        assert code == 0
        assert "p=0.20" in out
