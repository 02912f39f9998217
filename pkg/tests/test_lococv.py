"""
Tests for leave-one-center-out cross-validation
"""

import json
import tempfile
from pathlib import Path

import numpy as np
import pytest

from thyroidiomics.errors import FoldError, InvalidArgumentError
from thyroidiomics.evaluation.metrics import build_metrics_report
from thyroidiomics.experiment.lococv import (
    FoldResult,
    LococvConfig,
    aggregate,
    fit_fold,
    run_fold,
    run_scenarios,
    score_fold,
    split_lococv,
)
from thyroidiomics.experiment.manifest import CaseRecord, DatasetManifest, save_manifest
from thyroidiomics.experiment.phantom import PhantomSpec, generate_dataset
from thyroidiomics.imaging.grid import BinaryMask
from thyroidiomics.imaging.scin_io import read_scin, write_scin
from thyroidiomics.learning.features import FeatureTable
from thyroidiomics.learning.gbdt import GbdtHyperparams

QUICK = LococvConfig(k=5, lattice="quick", folds=3, seed=1)


def manifest_with_centers(*centers: int) -> DatasetManifest:
    root = Path(".")
    cases = []
    for center in centers:
        for label in ("MNG", "TH", "DG"):
            case_id = f"c{center:02d}_{label}_000"
            cases.append(CaseRecord(case_id, center, label, root / f"{case_id}.json", root / f"{case_id}_m.json"))
    return DatasetManifest(tuple(cases))


def fold_result(center: int, accuracy_hits: int, n: int = 10) -> FoldResult:
    """A fold whose MNG-only test set has ``accuracy_hits`` right out of ``n``"""
    probabilities = [[0.8, 0.1, 0.1]] * accuracy_hits + [[0.1, 0.8, 0.1]] * (n - accuracy_hits)
    report = build_metrics_report(center, ["MNG"] * n, probabilities)
    return FoldResult(
        center_id=center,
        n_train=20,
        n_test=n,
        dropped_by_correlation=[],
        selected=["FO_Mean"],
        importances={"FO_Mean": 1.0},
        hyperparams=GbdtHyperparams(),
        metrics=report,
        predictions=[],
    )


def synthetic_table(centers=(1, 2, 3), per_label: int = 8, seed: int = 0) -> FeatureTable:
    rng = np.random.default_rng(seed)
    rows, case_ids, centers_col, labels = [], [], [], []
    shift = {"MNG": 0.0, "TH": -4.0, "DG": 4.0}
    for center in centers:
        for label in ("MNG", "TH", "DG"):
            for index in range(per_label):
                values = rng.normal(size=12)
                values[0] += shift[label]
                values[1] = values[0] * 2.0 + rng.normal(scale=0.01)
                values[5] += shift[label] * 0.5
                rows.append(values)
                case_ids.append(f"c{center:02d}_{label}_{index:03d}")
                centers_col.append(center)
                labels.append(label)
    columns = tuple(f"f{i:02d}" for i in range(12))
    return FeatureTable(tuple(case_ids), tuple(centers_col), tuple(labels), columns, np.array(rows))


class TestSplit:
    """Test the center partition"""

    def test_one_fold_per_center(self):
        folds = split_lococv(manifest_with_centers(*range(1, 10)))
        assert [f[0] for f in folds] == list(range(1, 10))

    def test_partition(self):
        manifest = manifest_with_centers(1, 2, 3)
        all_ids = {c.case_id for c in manifest.cases}
        tested = []
        for center, train_ids, test_ids in split_lococv(manifest):
            assert set(train_ids) | set(test_ids) == all_ids
            assert not set(train_ids) & set(test_ids)
            assert all(i.startswith(f"c{center:02d}") for i in test_ids)
            tested.extend(test_ids)
        assert sorted(tested) == sorted(all_ids)

    def test_two_centers(self):
        (c1, train1, test1), (c2, train2, test2) = split_lococv(manifest_with_centers(1, 2))
        assert train1 == test2 and train2 == test1

    def test_single_center(self):
        with pytest.raises(FoldError):
            split_lococv(manifest_with_centers(1))


class TestAggregate:
    """Test across-center statistics"""

    def test_two_folds(self):
        summary = aggregate([fold_result(1, 7), fold_result(2, 8)])
        assert summary.accuracy["mean"] == pytest.approx(0.75)
        assert summary.accuracy["sd"] == pytest.approx(0.0707107, abs=1e-6)
        assert summary.accuracy["n"] == 2

    def test_single_fold(self):
        summary = aggregate([fold_result(1, 7)])
        assert summary.accuracy == {"mean": pytest.approx(0.7), "sd": 0.0, "n": 1}

    def test_order_does_not_matter(self):
        folds = [fold_result(1, 7), fold_result(2, 8), fold_result(3, 10)]
        forward = json.dumps(aggregate(folds).to_dict(), sort_keys=True)
        backward = json.dumps(aggregate(list(reversed(folds))).to_dict(), sort_keys=True)
        assert forward == backward

    def test_undefined_values_are_skipped(self):
        summary = aggregate([fold_result(1, 7), fold_result(2, 8)])
        assert summary.per_class["TH"]["roc_auc"] == {"mean": None, "sd": None, "n": 0}
        assert summary.selection.entries[0].count == 2

    def test_skipped_fold_is_listed_but_not_averaged(self):
        skipped = fold_result(2, 0)
        skipped.metrics = None
        skipped.n_test = 0
        skipped.skipped = "no test case left after extraction failures"
        skipped.test_failures = ["c02_MNG_000", "c02_TH_000"]
        summary = aggregate([fold_result(1, 7), skipped, fold_result(3, 9)])

        assert summary.centers == [1, 3]
        assert summary.skipped_centers == [2]
        assert summary.accuracy["mean"] == pytest.approx(0.8)
        assert summary.accuracy["n"] == 2
        assert summary.test_failures == 2
        assert summary.selection.entries[0].count == 3
        doc = summary.to_dict()
        assert doc["n_folds"] == 2
        assert doc["skipped_centers"] == [2]

    def test_nothing_to_aggregate(self):
        with pytest.raises(InvalidArgumentError):
            aggregate([])


class TestRunFold:
    """Test one fold of the pipeline on a synthetic table"""

    def setup_method(self):
        self.table = synthetic_table()
        held_out = np.array([c == 3 for c in self.table.centers])
        self.train = self.table.rows(~held_out)
        self.test = self.table.rows(held_out)

    def test_fold(self):
        result = run_fold(self.train, self.test, QUICK, fold_seed=11)
        assert result.center_id == 3
        assert result.n_train == 48 and result.n_test == 24
        assert "f01" in result.dropped_by_correlation
        assert len(result.selected) == 5
        assert "f00" in result.selected
        assert result.metrics.accuracy >= 0.8
        assert len(result.predictions) == 24
        assert result.hyperparams.seed == 11

    def test_deterministic(self):
        a = run_fold(self.train, self.test, QUICK, fold_seed=11)
        b = run_fold(self.train, self.test, QUICK, fold_seed=11)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
        assert FoldResult.from_dict(json.loads(json.dumps(a.to_dict()))).to_dict() == a.to_dict()

    def test_empty_test_split_is_skipped(self):
        fitted = fit_fold(self.train, QUICK, fold_seed=11)
        result = score_fold(fitted, self.test.rows(np.zeros(self.test.n_rows, dtype=bool)), 3)
        assert not result.scored
        assert result.skipped
        assert result.n_test == 0 and result.predictions == []
        assert result.selected == list(fitted.selected)

        restored = FoldResult.from_dict(json.loads(json.dumps(result.to_dict())))
        assert restored.metrics is None
        assert restored.skipped == result.skipped

    def test_center_leak(self):
        with pytest.raises(FoldError):
            run_fold(self.table, self.test, QUICK, fold_seed=0)

    def test_config_dict(self):
        config = LococvConfig.from_dict(QUICK.to_dict())
        assert config.to_dict() == QUICK.to_dict()
        with pytest.raises(InvalidArgumentError):
            LococvConfig.from_dict({"lattice": "huge"})


@pytest.mark.slow
@pytest.mark.integration
class TestRunScenarios:
    """End-to-end runs on a small phantom"""

    def setup_method(self):
        self.spec = PhantomSpec(centers=3, per_center=(6, 6, 6), size=96, large_center=None, seed=2)
        self.config = LococvConfig(k=8, lattice="quick", folds=3, seed=0)

    def test_identical_masks_give_identical_scenarios(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            manifest = generate_dataset(self.spec, Path(temp_dir))
            same = DatasetManifest(tuple(
                CaseRecord(c.case_id, c.center_id, c.label, c.image, c.physician_mask, c.physician_mask)
                for c in manifest.cases
            ))
            save_manifest(same, Path(temp_dir) / "same.json")

            results = run_scenarios(same, [1, 2], self.config)
            first = [json.dumps(r.to_dict()) for r in results[1]]
            second = [json.dumps(r.to_dict()) for r in results[2]]
            assert first == second
            assert len(first) == 3

    def test_phantom_is_separable(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            manifest = generate_dataset(self.spec, Path(temp_dir))
            results = run_scenarios(manifest, [1], self.config)[1]
            assert [r.center_id for r in results] == [1, 2, 3]
            for result in results:
                assert result.metrics.value("f1", "macro") >= 0.85
            summary = aggregate(results)
            assert summary.to_dict()["n_folds"] == 3

    def test_center_without_usable_predicted_masks(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            manifest = generate_dataset(self.spec, Path(temp_dir))
            for case in manifest.cases:
                if case.center_id == 2:
                    original = read_scin(case.predicted_mask)
                    write_scin(BinaryMask(np.zeros_like(original.values), original.spacing), case.predicted_mask)

            results = run_scenarios(manifest, [1, 2], self.config)
            by_center = {r.center_id: r for r in results[2]}
            assert not by_center[2].scored
            assert len(by_center[2].test_failures) == 18
            assert by_center[1].scored and by_center[3].scored
            assert all(r.scored for r in results[1])

            summary = aggregate(results[2])
            assert summary.centers == [1, 3]
            assert summary.skipped_centers == [2]
            assert summary.test_failures == 18
            assert summary.train_failures == 0

    def test_unknown_scenario(self):
        with pytest.raises(InvalidArgumentError):
            run_scenarios(manifest_with_centers(1, 2), [3], self.config)
