"""
Tests for feature tables, standardization and feature selection
"""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from thyroidiomics.errors import InvalidArgumentError, InvalidRangeError, SchemaError, UndefinedStatisticError
from thyroidiomics.learning.features import (
    FeatureTable,
    ZScoreParams,
    build_selection_report,
    correlation_filter,
    fit_zscore,
    rfe_select,
    spearman_rho,
    table_zscore,
)
from thyroidiomics.learning.gbdt import GbdtHyperparams


def make_table(values, columns=None, labels=None) -> FeatureTable:
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    columns = columns or [f"c{i}" for i in range(values.shape[1])]
    labels = labels or ["MNG"] * n
    return FeatureTable(tuple(f"case{i}" for i in range(n)), tuple([1] * n), tuple(labels), tuple(columns), values)


class TestFeatureTable:
    """Test the table container and its CSV form"""

    def test_csv_round_trip_is_exact(self):
        rng = np.random.default_rng(0)
        table = FeatureTable(
            ("c01_MNG_000", "c02_TH_001"),
            (1, 2),
            ("MNG", "TH"),
            ("FO_Mean", "GLCM_Idm"),
            rng.normal(size=(2, 2)) / 3.0,
        )
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "features.csv"
            table.to_csv(path)
            header = path.read_text().splitlines()[0]
            assert header == "case_id,center_id,label,FO_Mean,GLCM_Idm"

            back = FeatureTable.read_csv(path)
            assert back.case_ids == table.case_ids
            assert back.centers == table.centers
            assert back.labels == table.labels
            np.testing.assert_array_equal(back.values, table.values)

    def test_unlabelled_rows_survive_csv(self):
        table = FeatureTable(("a",), (3,), ("",), ("x",), np.array([[1.5]]))
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "t.csv"
            table.to_csv(path)
            assert FeatureTable.read_csv(path).labels == ("",)

    def test_missing_id_column(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "bad.csv"
            path.write_text("case_id,x\na,1\n")
            with pytest.raises(SchemaError):
                FeatureTable.read_csv(path)

    def test_rejects_non_finite(self):
        with pytest.raises(SchemaError):
            make_table([[1.0, np.inf]])

    def test_select_rows_and_concat(self):
        table = make_table(np.arange(12).reshape(4, 3))
        picked = table.select(["c2", "c0"])
        np.testing.assert_array_equal(picked.values[:, 0], [2, 5, 8, 11])
        assert table.rows([0, 2]).case_ids == ("case0", "case2")
        assert FeatureTable.concat([table.rows([0]), table.rows([1])]).n_rows == 2
        with pytest.raises(InvalidArgumentError):
            table.select(["nope"])


class TestZScore:
    """Test train-only standardization"""

    def test_train_is_standardized(self):
        rng = np.random.default_rng(1)
        table = make_table(rng.normal(5.0, 2.0, (30, 3)))
        standardized = fit_zscore(table).apply(table)
        np.testing.assert_allclose(standardized.values.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(standardized.values.std(axis=0), 1.0)

    def test_test_uses_train_parameters(self):
        train = make_table([[1.0], [2.0], [3.0]])
        test = make_table([[2.0]])
        _, test_out = table_zscore(train, test)
        assert test_out.values[0, 0] == pytest.approx(0.0)

    def test_constant_column_passes_through(self):
        table = make_table([[4.0, 1.0], [4.0, 2.0]])
        params = fit_zscore(table)
        assert params.constant == ("c0",)
        np.testing.assert_array_equal(params.apply(table).values[:, 0], [4.0, 4.0])

    def test_subset_and_dict(self):
        table = make_table([[1.0, 10.0, 5.0], [3.0, 30.0, 5.0]])
        params = fit_zscore(table).subset(["c1", "c2"])
        assert params.columns == ("c1", "c2")
        assert params.constant == ("c2",)
        restored = ZScoreParams.from_dict(params.to_dict())
        np.testing.assert_array_equal(restored.mean, params.mean)
        np.testing.assert_array_equal(restored.sd, params.sd)
        with pytest.raises(SchemaError):
            ZScoreParams.from_dict({"columns": ["a"], "mean": [], "sd": []})


class TestSpearman:
    """Test the rank correlation"""

    def test_monotone(self):
        assert spearman_rho([1, 2, 3, 4], [2, 5, 7, 100]) == pytest.approx(1.0)
        assert spearman_rho([1, 2, 3, 4], [9, 5, 2, 0]) == pytest.approx(-1.0)

    def test_ties(self):
        assert spearman_rho([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(4.5 / np.sqrt(22.5))

    def test_constant_input(self):
        with pytest.raises(UndefinedStatisticError):
            spearman_rho([1, 1, 1], [1, 2, 3])


class TestCorrelationFilter:
    """Test the greedy near-duplicate filter"""

    def test_duplicate_drops_later(self):
        rng = np.random.default_rng(2)
        base = rng.normal(size=20)
        other = rng.normal(size=20)
        table = make_table(np.column_stack([other, base, base * 3.0]), ["a", "b", "c"])
        assert correlation_filter(table, 0.95) == ["a", "b"]

    def test_three_duplicates_keep_first(self):
        base = np.arange(10.0)
        table = make_table(np.column_stack([base, base + 1, base ** 2]), ["A", "B", "C"])
        assert correlation_filter(table, 0.95) == ["A"]

    def test_uncorrelated_keeps_all(self):
        rng = np.random.default_rng(5)
        table = make_table(rng.normal(size=(200, 4)))
        assert correlation_filter(table, 0.95) == ["c0", "c1", "c2", "c3"]

    def test_constant_columns_are_kept(self):
        table = make_table([[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 3.0, 3.0]])
        assert correlation_filter(table, 0.95) == ["c0", "c1"]

    def test_threshold_range(self):
        with pytest.raises(InvalidRangeError):
            correlation_filter(make_table([[1.0], [2.0]]), 0.0)


class TestRfe:
    """Test recursive feature elimination"""

    def setup_method(self):
        rng = np.random.default_rng(4)
        n = 150
        values = rng.normal(size=(n, 12))
        labels = np.where(values[:, 3] > 0.3, "MNG", np.where(values[:, 8] > 0.0, "DG", "TH"))
        columns = [f"f{i:02d}" for i in range(12)]
        self.table = make_table(values, columns, list(labels))
        self.hp = GbdtHyperparams(n_rounds=20, max_depth=3, learning_rate=0.3)

    def test_keeps_informative_columns(self):
        selected, importances = rfe_select(self.table, 10, self.hp)
        assert len(selected) == 10
        assert {"f03", "f08"} <= set(selected)
        assert set(importances) == set(selected)
        assert sum(importances.values()) == pytest.approx(1.0)

    @pytest.mark.slow
    def test_selects_exactly_the_informative_pair(self):
        selected, _ = rfe_select(self.table, 2, self.hp)
        assert selected == ["f03", "f08"]

    def test_k_equal_to_width_is_identity(self):
        table = self.table.select(["f00", "f03", "f08"])
        selected, _ = rfe_select(table, 3, self.hp)
        assert selected == ["f00", "f03", "f08"]

    def test_k_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            rfe_select(self.table, 13, self.hp)
        with pytest.raises(InvalidArgumentError):
            rfe_select(self.table, 0, self.hp)


class TestSelectionReport:
    """Test aggregation of per-fold selections"""

    def test_counts_and_means(self):
        report = build_selection_report([{"a": 0.2, "b": 0.8}, {"a": 0.3}])
        entries = {e.name: e for e in report.entries}
        assert report.n_folds == 2
        assert entries["a"].count == 2
        assert entries["a"].mean_importance == pytest.approx(0.25)
        assert entries["b"].count == 1
        assert report.entries[0].name == "a"

    def test_never_selected_is_absent(self):
        report = build_selection_report([{"a": 1.0}] * 9)
        assert [e.name for e in report.entries] == ["a"]
        assert report.entries[0].count == 9
        assert "c" not in {f["name"] for f in report.to_dict()["features"]}

    def test_empty(self):
        with pytest.raises(InvalidArgumentError):
            build_selection_report([])
