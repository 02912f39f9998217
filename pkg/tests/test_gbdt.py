"""
Tests for the boosted-tree classifier and hyperparameter search
"""

import json

import numpy as np
import pytest

from thyroidiomics.errors import (
    DegenerateTrainingError,
    FoldError,
    InvalidArgumentError,
    InvalidRangeError,
    SchemaError,
)
from thyroidiomics.learning.gbdt import (
    GbdtHyperparams,
    GbdtModel,
    feature_importance,
    predict,
    predict_proba,
    train,
)
from thyroidiomics.learning.model_selection import (
    DEFAULT_LATTICE_AXES,
    default_lattice,
    grid_search_cv,
    lattice_from_axes,
    resolve_lattice,
    stratified_folds,
)


def separable_set(n: int = 100, seed: int = 0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, (n, 3))
    y = np.where(X[:, 0] > 0, "MNG", "TH")
    return X, y


class TestTrain:
    """Test fitting and prediction"""

    def setup_method(self):
        self.X, self.y = separable_set()
        self.hp = GbdtHyperparams(n_rounds=20, max_depth=2, learning_rate=0.3)
        self.model = train(self.X, self.y, self.hp, ["x0", "x1", "x2"])

    def test_fits_separable_data(self):
        assert predict(self.model, self.X) == list(self.y)
        assert self.model.n_rounds == 20
        assert self.model.categories == ("MNG", "TH")

    def test_training_loss_decreases(self):
        assert self.model.train_loss[-1] < self.model.train_loss[0]

    def test_probabilities(self):
        p = predict_proba(self.model, self.X)
        assert p.shape == (100, 2)
        assert np.all(p >= 0)
        np.testing.assert_allclose(p.sum(axis=1), 1.0)

    def test_single_row(self):
        p = predict_proba(self.model, self.X[0])
        assert p.shape == (2,)
        assert predict(self.model, self.X[0]) == [self.y[0]]

    def test_informative_feature_dominates(self):
        importance = feature_importance(self.model, normalize=True)
        assert max(importance, key=importance.get) == "x0"
        assert sum(importance.values()) == pytest.approx(1.0)

    def test_deterministic(self):
        again = train(self.X, self.y, self.hp, ["x0", "x1", "x2"])
        assert json.dumps(again.to_dict()) == json.dumps(self.model.to_dict())

    def test_tree_depth_is_bounded(self):
        for round_trees in self.model.trees:
            assert all(tree.depth() <= 2 for tree in round_trees)

    def test_serialization(self):
        restored = GbdtModel.from_dict(json.loads(json.dumps(self.model.to_dict())))
        np.testing.assert_array_equal(predict_proba(restored, self.X), predict_proba(self.model, self.X))
        assert restored.hyperparams == self.hp

    def test_explicit_category_order(self):
        model = train(self.X, self.y, self.hp, categories=["TH", "MNG", "DG"])
        p = predict_proba(model, self.X)
        assert p.shape == (100, 3)
        assert set(predict(model, self.X)) <= {"TH", "MNG"}


class TestDegenerateInputs:
    """Test behaviour on inputs that carry no signal"""

    def test_constant_features_predict_prior(self):
        X = np.ones((10, 2))
        y = ["MNG"] * 6 + ["TH"] * 4
        model = train(X, y, GbdtHyperparams(n_rounds=5))
        np.testing.assert_allclose(predict_proba(model, X), np.tile([0.6, 0.4], (10, 1)))
        assert all(v == 0.0 for v in feature_importance(model).values())

    def test_untrained_model_is_uniform(self):
        model = GbdtModel.untrained(["MNG", "TH", "DG"], ["a", "b"])
        np.testing.assert_allclose(predict_proba(model, np.zeros((4, 2))), 1.0 / 3.0)
        assert feature_importance(model, normalize=True) == {"a": 0.0, "b": 0.0}

    def test_single_label(self):
        with pytest.raises(DegenerateTrainingError):
            train(np.zeros((4, 1)), ["TH"] * 4, GbdtHyperparams())

    def test_unknown_label(self):
        with pytest.raises(InvalidArgumentError):
            train(np.zeros((2, 1)), ["TH", "XX"], GbdtHyperparams(), categories=["TH", "MNG"])

    def test_non_finite_input(self):
        with pytest.raises(InvalidArgumentError):
            train(np.array([[np.nan], [1.0]]), ["TH", "MNG"], GbdtHyperparams())

    def test_wrong_width_at_prediction(self):
        X, y = separable_set(20)
        model = train(X, y, GbdtHyperparams(n_rounds=2))
        with pytest.raises(InvalidArgumentError):
            predict_proba(model, np.zeros((1, 5)))

    def test_invalid_hyperparams(self):
        with pytest.raises(InvalidRangeError):
            GbdtHyperparams(max_depth=0)
        with pytest.raises(InvalidRangeError):
            GbdtHyperparams(learning_rate=0.0)

    def test_malformed_model(self):
        with pytest.raises(SchemaError):
            GbdtModel.from_dict({"categories": ["A", "B"]})
        with pytest.raises(SchemaError):
            GbdtModel.from_dict({"categories": ["A", "B"], "feature_names": [], "base_margin": [0.0]})


class TestModelSelection:
    """Test stratified folds and the lattice search"""

    def test_folds_are_stratified(self):
        y = ["MNG"] * 10 + ["TH"] * 10 + ["DG"] * 5
        fold_ids = stratified_folds(y, 5, seed=3)
        labels = np.array(y)
        for fold in range(5):
            held = labels[fold_ids == fold]
            assert (held == "MNG").sum() == 2
            assert (held == "TH").sum() == 2
            assert (held == "DG").sum() == 1

    def test_folds_depend_on_seed_only(self):
        y = ["MNG", "TH"] * 10
        np.testing.assert_array_equal(stratified_folds(y, 4, 1), stratified_folds(y, 4, 1))
        assert not np.array_equal(stratified_folds(y, 4, 1), stratified_folds(y, 4, 2))

    def test_too_few_samples(self):
        with pytest.raises(FoldError):
            stratified_folds(["MNG"] * 10 + ["TH"] * 2, 5, 0)

    def test_lattice(self):
        assert len(default_lattice()) == 27
        assert len(resolve_lattice("quick")) == 4
        assert resolve_lattice({"max_depth": [2]}) == [GbdtHyperparams(max_depth=2)]
        with pytest.raises(InvalidArgumentError):
            resolve_lattice("huge")
        with pytest.raises(InvalidArgumentError):
            lattice_from_axes({"subsample": [0.5]})
        assert set(DEFAULT_LATTICE_AXES) == {"n_rounds", "max_depth", "learning_rate", "l2_reg", "min_split_gain"}

    def test_single_point(self):
        X, y = separable_set(40)
        point = GbdtHyperparams(n_rounds=3)
        assert grid_search_cv(X, y, [point], folds=2) == point

    def test_duplicate_points_keep_first(self):
        X, y = separable_set(40)
        a = GbdtHyperparams(n_rounds=3, seed=1)
        b = GbdtHyperparams(n_rounds=3, seed=2)
        assert grid_search_cv(X, y, [a, b], folds=2).seed == 1

    @pytest.mark.slow
    def test_interaction_needs_depth(self):
        rng = np.random.default_rng(7)
        X = rng.uniform(-1.0, 1.0, (200, 2))
        y = np.where(X[:, 0] * X[:, 1] > 0, "MNG", "TH")
        grid = [
            GbdtHyperparams(n_rounds=30, max_depth=1, learning_rate=0.3),
            GbdtHyperparams(n_rounds=30, max_depth=3, learning_rate=0.3),
        ]
        assert grid_search_cv(X, y, grid, folds=5, seed=0).max_depth == 3

    def test_empty_lattice(self):
        X, y = separable_set(20)
        with pytest.raises(InvalidArgumentError):
            grid_search_cv(X, y, [], folds=2)
