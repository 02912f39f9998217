"""
Tests for the command-line interface

Runs the click commands in-process with CliRunner.
"""

import json
import tempfile
from pathlib import Path

import click
import numpy as np
import pytest
from click.testing import CliRunner

from thyroidiomics.commands.common import SEED_ENVVAR, get_workers, parse_int_list
from thyroidiomics.evaluation.metrics import build_metrics_report
from thyroidiomics.imaging.grid import BinaryMask
from thyroidiomics.imaging.scin_io import write_scin
from thyroidiomics.main import cli

SMALL_PHANTOM = ["phantom", "--centers", "2", "--per-center", "2,2,2", "--size", "96", "--large-center", "0"]


class TestCliBasics:
    """Test the command group"""

    def setup_method(self):
        self.runner = CliRunner()

    def test_help_lists_commands(self):
        result = self.runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        for name in ("phantom", "extract", "select", "train", "predict", "lococv", "dsc", "roi-counts", "tost"):
            assert name in result.output

    def test_no_command_shows_banner(self):
        result = self.runner.invoke(cli, [])
        assert result.exit_code == 0
        assert "thyroidiomics" in result.output

    def test_unknown_command(self):
        result = self.runner.invoke(cli, ["segment"])
        assert result.exit_code == 2

    def test_toolkit_error_exits_with_prefix(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            result = self.runner.invoke(
                cli, ["lococv", "-m", str(Path(temp_dir) / "missing.json"), "--out", temp_dir]
            )
            assert result.exit_code == 1
            assert "missing file:" in result.output

    def test_missing_config(self):
        result = self.runner.invoke(cli, ["--config", "no-such-preset", "phantom", "--out", "x"])
        assert result.exit_code == 1
        assert "missing file:" in result.output

    def test_parse_int_list(self):
        assert parse_int_list("20,20,20", 3, "--per-center") == (20, 20, 20)
        with pytest.raises(click.BadParameter):
            parse_int_list("1,2", 3, "--per-center")
        with pytest.raises(click.BadParameter):
            parse_int_list("a,b,c", 3, "--per-center")

    def test_bad_per_center_is_a_usage_error(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            result = self.runner.invoke(cli, ["phantom", "--per-center", "1,2", "--out", temp_dir])
            assert result.exit_code == 2


class TestPhantomCommand:
    """Test dataset generation from the CLI"""

    def setup_method(self):
        self.runner = CliRunner()

    def test_generates_manifest_and_provenance(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "data"
            result = self.runner.invoke(cli, ["--workers", "1"] + SMALL_PHANTOM + ["--seed", "5", "--out", str(out)])
            assert result.exit_code == 0, result.output
            assert "Generated 12 cases" in result.output

            manifest = json.loads((out / "manifest.json").read_text())
            assert len(manifest["cases"]) == 12
            run = json.loads((out / "run.json").read_text())
            assert run["command"] == "phantom"
            assert run["config"]["seed"] == 5

    def test_seed_from_environment(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "data"
            result = self.runner.invoke(cli, SMALL_PHANTOM + ["--out", str(out)], env={SEED_ENVVAR: "42"})
            assert result.exit_code == 0, result.output
            assert json.loads((out / "run.json").read_text())["config"]["seed"] == 42

    def test_flag_beats_environment(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "data"
            result = self.runner.invoke(cli, SMALL_PHANTOM + ["--seed", "3", "--out", str(out)], env={SEED_ENVVAR: "42"})
            assert result.exit_code == 0, result.output
            assert json.loads((out / "run.json").read_text())["config"]["seed"] == 3

    def test_yaml_config_sets_defaults(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            config = Path(temp_dir) / "run.yaml"
            config.write_text(
                "phantom:\n  centers: 1\n  per-center: '1,1,1'\n  size: 96\n  large-center: 0\n  seed: 9\n"
            )
            out = Path(temp_dir) / "data"
            result = self.runner.invoke(cli, ["--config", str(config), "phantom", "--out", str(out)])
            assert result.exit_code == 0, result.output

            run = json.loads((out / "run.json").read_text())
            assert run["config"]["centers"] == 1
            assert run["config"]["seed"] == 9
            assert len(json.loads((out / "manifest.json").read_text())["cases"]) == 3

    def test_workers_from_config(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            config = Path(temp_dir) / "run.json"
            config.write_text(json.dumps({"workers": 2}))

            @cli.command("show-workers")
            @click.pass_context
            def show_workers(ctx):
                click.echo(f"workers={get_workers(ctx)}")

            try:
                result = self.runner.invoke(cli, ["--config", str(config), "show-workers"])
                assert result.exit_code == 0, result.output
                assert "workers=2" in result.output
                result = self.runner.invoke(cli, ["--workers", "3", "--config", str(config), "show-workers"])
                assert "workers=3" in result.output
            finally:
                cli.commands.pop("show-workers")

    def test_quick_preset(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            out = Path(temp_dir) / "data"
            result = self.runner.invoke(
                cli, ["--config", "quick", "phantom", "--per-center", "1,1,1", "--out", str(out)]
            )
            assert result.exit_code == 0, result.output
            run = json.loads((out / "run.json").read_text())
            assert run["config"]["centers"] == 4
            assert run["config"]["size"] == 96
            assert run["config"]["per_center"] == [1, 1, 1]


class TestDscCommand:
    """Test the pair mode of the overlap command"""

    def setup_method(self):
        self.runner = CliRunner()

    def test_pair(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir)
            a = np.zeros((4, 4), dtype=np.uint8)
            b = np.zeros((4, 4), dtype=np.uint8)
            a[0, 0:2] = 1
            b[0, 1:3] = 1
            write_scin(BinaryMask(a), root / "pred.json")
            write_scin(BinaryMask(b), root / "gt.json")

            result = self.runner.invoke(
                cli, ["dsc", "--pred", str(root / "pred.json"), "--gt", str(root / "gt.json"), "--out", str(root / "d.json")]
            )
            assert result.exit_code == 0, result.output
            assert "0.500000" in result.output
            assert json.loads((root / "d.json").read_text())["dsc"] == pytest.approx(0.5)

    def test_needs_one_mode(self):
        result = self.runner.invoke(cli, ["dsc"])
        assert result.exit_code == 1
        assert "invalid argument:" in result.output


class TestTostCommand:
    """Test equivalence testing from report files"""

    def setup_method(self):
        self.runner = CliRunner()
        rows = [[0.7, 0.2, 0.1], [0.2, 0.6, 0.2], [0.1, 0.2, 0.7], [0.6, 0.3, 0.1]]
        labels = ["MNG", "TH", "DG", "MNG"]
        self.reports = [build_metrics_report(center, labels, rows).to_dict() for center in (1, 2, 3)]

    def test_all_metrics(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir)
            (root / "a.json").write_text(json.dumps(self.reports))
            (root / "b.json").write_text(json.dumps({"folds": self.reports}))

            result = self.runner.invoke(
                cli, ["tost", "--a", str(root / "a.json"), "--b", str(root / "b.json"), "--all", "--out", str(root / "t.json")]
            )
            assert result.exit_code == 0, result.output
            doc = json.loads((root / "t.json").read_text())
            assert len(doc["rows"]) == 15
            assert all(row["result"]["equivalent"] for row in doc["rows"] if row["result"] is not None)

    def test_single_metric(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir)
            (root / "a.json").write_text(json.dumps(self.reports))
            result = self.runner.invoke(
                cli,
                ["tost", "--a", str(root / "a.json"), "--b", str(root / "a.json"), "--metric", "recall", "--class", "macro", "--out", str(root / "t.json")],
            )
            assert result.exit_code == 0, result.output
            doc = json.loads((root / "t.json").read_text())
            assert doc["result"]["n"] == 3
            assert doc["result"]["equivalent"] is True

    def test_malformed_reports(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir)
            (root / "a.json").write_text(json.dumps({"nothing": 1}))
            result = self.runner.invoke(cli, ["tost", "--a", str(root / "a.json"), "--b", str(root / "a.json")])
            assert result.exit_code == 1
            assert "schema error:" in result.output


@pytest.mark.slow
@pytest.mark.integration
class TestPipelineCommands:
    """Full runs on a small phantom"""

    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, args):
        result = self.runner.invoke(cli, ["--workers", "1"] + args)
        assert result.exit_code == 0, result.output
        return result

    def test_extract_select_train_predict(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir)
            self.invoke(SMALL_PHANTOM + ["--per-center", "4,4,4", "--out", str(root / "data")])
            manifest = str(root / "data" / "manifest.json")

            self.invoke(["extract", "-m", manifest, "--out", str(root / "features.csv")])
            header = (root / "features.csv").read_text().splitlines()[0].split(",")
            assert header[:3] == ["case_id", "center_id", "label"]
            assert len(header) == 3 + 93

            self.invoke(["select", "-f", str(root / "features.csv"), "--k", "4", "--out", str(root / "selection.json")])
            selection = json.loads((root / "selection.json").read_text())
            assert len(selection["selected"]) == 4

            self.invoke([
                "train", "-f", str(root / "features.csv"), "-s", str(root / "selection.json"),
                "--lattice", "quick", "--folds", "2", "--out", str(root / "model.json"),
            ])
            model = json.loads((root / "model.json").read_text())
            assert model["standardization"]["columns"] == selection["selected"]

            self.invoke(["predict", "-M", str(root / "model.json"), "-f", str(root / "features.csv"), "--out", str(root / "pred.json")])
            predictions = json.loads((root / "pred.json").read_text())
            assert len(predictions["predictions"]) == 24
            assert "metrics" in predictions

            self.invoke(["roi-counts", "-m", manifest, "--out", str(root / "counts.csv")])
            assert len((root / "counts.csv").read_text().splitlines()) == 25

    def test_lococv_both_scenarios(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            root = Path(temp_dir)
            self.invoke(SMALL_PHANTOM + ["--per-center", "4,4,4", "--out", str(root / "data")])
            self.invoke([
                "lococv", "-m", str(root / "data" / "manifest.json"),
                "--scenario", "1", "--scenario", "2",
                "--k", "4", "--lattice", "quick", "--folds", "2", "--seed", "7",
                "--out", str(root / "results"),
            ])

            results = root / "results"
            for scenario in ("scenario_1", "scenario_2"):
                summary = json.loads((results / scenario / "summary.json").read_text())
                assert summary["n_folds"] == 2
                assert len(summary["folds"]) == 2
                assert (results / scenario / "fold_center_01.json").exists()
                assert (results / scenario / "selection_report.json").exists()
            assert len(json.loads((results / "tost.json").read_text())["rows"]) == 15
            assert json.loads((results / "run.json").read_text())["scenarios"] == [1, 2]
