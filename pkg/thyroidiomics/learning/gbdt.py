"""
Multiclass gradient-boosted decision trees

Softmax cross-entropy objective, one regression tree per category and round,
second-order split gain with L2 regularization and exact greedy splits at
midpoints between consecutive distinct values. Training draws no random
numbers, so a model depends only on its data and hyperparameters.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import log_softmax, softmax

from ..errors import DegenerateTrainingError, InvalidArgumentError, InvalidRangeError, SchemaError

logger = logging.getLogger(__name__)

MIN_HESSIAN = 1e-16
_PRIOR_FLOOR = 1e-12


@dataclass(frozen=True)
class GbdtHyperparams:
    """
    Boosting hyperparameters

    Attributes:
        n_rounds: Boosting rounds (one tree per category each round)
        max_depth: Maximum tree depth (root has depth 0)
        learning_rate: Shrinkage applied to every leaf value
        l2_reg: L2 penalty on leaf values (lambda)
        min_split_gain: Minimum gain a split must exceed (gamma)
        seed: Recorded with the model; training itself is deterministic
    """

    n_rounds: int = 100
    max_depth: int = 3
    learning_rate: float = 0.1
    l2_reg: float = 1.0
    min_split_gain: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        errors = self.validate()
        if errors:
            raise InvalidRangeError("; ".join(errors))

    def validate(self) -> List[str]:
        errors = []
        if self.n_rounds < 1:
            errors.append("n_rounds must be >= 1")
        if self.max_depth < 1:
            errors.append("max_depth must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            errors.append("learning_rate must lie in (0, 1]")
        if self.l2_reg < 0:
            errors.append("l2_reg must be >= 0")
        if self.min_split_gain < 0:
            errors.append("min_split_gain must be >= 0")
        return errors

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GbdtHyperparams":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def describe(self) -> str:
        return (
            f"rounds={self.n_rounds} depth={self.max_depth} lr={self.learning_rate:g} "
            f"lambda={self.l2_reg:g} gamma={self.min_split_gain:g}"
        )


@dataclass(eq=False)
class RegressionTree:
    """
    A regression tree in flat node arrays

    Node 0 is the root. ``feature[k] == -1`` marks a leaf; an internal node
    sends a row left when ``x[feature] < threshold``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    gain: np.ndarray

    def depth(self, node: int = 0) -> int:
        if self.feature[node] < 0:
            return 0
        return 1 + max(self.depth(int(self.left[node])), self.depth(int(self.right[node])))

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf value reached by every row of ``X``"""
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[node]
            rows = np.nonzero(feat >= 0)[0]
            if rows.size == 0:
                return self.value[node]
            current = node[rows]
            go_left = X[rows, feat[rows]] < self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])

    def to_dict(self, node: int = 0) -> Dict[str, Any]:
        if self.feature[node] < 0:
            return {"leaf": float(self.value[node])}
        return {
            "feature": int(self.feature[node]),
            "threshold": float(self.threshold[node]),
            "gain": float(self.gain[node]),
            "left": self.to_dict(int(self.left[node])),
            "right": self.to_dict(int(self.right[node])),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RegressionTree":
        builder = _TreeBuilder()

        def visit(entry: Dict[str, Any]) -> int:
            if "leaf" in entry:
                return builder.leaf(float(entry["leaf"]))
            node = builder.split(int(entry["feature"]), float(entry["threshold"]), float(entry["gain"]))
            builder.attach(node, visit(entry["left"]), visit(entry["right"]))
            return node

        try:
            visit(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed tree node: {exc}") from exc
        return builder.build()


class _TreeBuilder:
    def __init__(self) -> None:
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[float] = []
        self.gain: List[float] = []

    def _add(self, feature: int, threshold: float, value: float, gain: float) -> int:
        self.feature.append(feature)
        self.threshold.append(threshold)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        self.gain.append(gain)
        return len(self.feature) - 1

    def leaf(self, value: float) -> int:
        return self._add(-1, 0.0, value, 0.0)

    def split(self, feature: int, threshold: float, gain: float) -> int:
        return self._add(feature, threshold, 0.0, gain)

    def attach(self, node: int, left: int, right: int) -> None:
        self.left[node] = left
        self.right[node] = right

    def build(self) -> RegressionTree:
        return RegressionTree(
            feature=np.array(self.feature, dtype=np.int64),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int64),
            right=np.array(self.right, dtype=np.int64),
            value=np.array(self.value, dtype=np.float64),
            gain=np.array(self.gain, dtype=np.float64),
        )


@dataclass(eq=False)
class GbdtModel:
    """
    A trained (or zero-round) boosted ensemble

    ``trees[r][k]`` is the round-``r`` tree of category ``k``.
    """

    categories: Tuple[str, ...]
    feature_names: Tuple[str, ...]
    base_margin: np.ndarray
    trees: List[List[RegressionTree]] = field(default_factory=list)
    hyperparams: Optional[GbdtHyperparams] = None
    train_loss: List[float] = field(default_factory=list)

    @classmethod
    def untrained(cls, categories: Sequence[str], feature_names: Sequence[str]) -> "GbdtModel":
        """Zero-round model: every input gets the uniform distribution"""
        return cls(tuple(categories), tuple(feature_names), np.zeros(len(categories)))

    @property
    def n_rounds(self) -> int:
        return len(self.trees)

    def margins(self, X: np.ndarray) -> np.ndarray:
        X = self._check_input(X)
        out = np.tile(self.base_margin, (X.shape[0], 1))
        for round_trees in self.trees:
            for k, tree in enumerate(round_trees):
                out[:, k] += tree.apply(X)
        return out

    def _check_input(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise InvalidArgumentError(
                f"expected rows of {len(self.feature_names)} features, got shape {X.shape}"
            )
        return X

    def to_dict(self) -> Dict[str, Any]:
        return {
            "categories": list(self.categories),
            "feature_names": list(self.feature_names),
            "base_margin": [float(v) for v in self.base_margin],
            "hyperparams": self.hyperparams.to_dict() if self.hyperparams else None,
            "train_loss": [float(v) for v in self.train_loss],
            "trees": [[tree.to_dict() for tree in round_trees] for round_trees in self.trees],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GbdtModel":
        try:
            categories = tuple(str(c) for c in data["categories"])
            model = cls(
                categories=categories,
                feature_names=tuple(str(n) for n in data["feature_names"]),
                base_margin=np.array(data["base_margin"], dtype=np.float64),
                trees=[[RegressionTree.from_dict(t) for t in rnd] for rnd in data.get("trees", [])],
                hyperparams=(
                    GbdtHyperparams.from_dict(data["hyperparams"]) if data.get("hyperparams") else None
                ),
                train_loss=[float(v) for v in data.get("train_loss", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed model: {exc}") from exc
        if model.base_margin.shape != (len(categories),):
            raise SchemaError("base_margin length does not match the category count")
        if any(len(rnd) != len(categories) for rnd in model.trees):
            raise SchemaError("every round must hold one tree per category")
        return model


def _best_split(
    X: np.ndarray,
    order: np.ndarray,
    member: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    l2_reg: float,
) -> Optional[Tuple[float, int, float]]:
    """
    Exact greedy split search over all features at once

    Returns:
        ``(gain, feature, threshold)`` of the best split, or ``None`` when no
        feature has two distinct values among the members. Ties go to the
        lowest feature, then the lowest threshold.
    """
    m = int(member.sum())
    if m < 2:
        return None
    n_features = X.shape[1]
    idx = order.T[member[order].T].reshape(n_features, m)
    xs = np.take_along_axis(X.T, idx, axis=1)
    distinct = xs[:, 1:] > xs[:, :-1]
    if not distinct.any():
        return None

    g_total = float(g[member].sum())
    h_total = float(h[member].sum())
    gl = np.cumsum(g[idx], axis=1)[:, :-1]
    hl = np.cumsum(h[idx], axis=1)[:, :-1]
    gr = g_total - gl
    hr = h_total - hl
    gain = 0.5 * (
        gl ** 2 / (hl + l2_reg) + gr ** 2 / (hr + l2_reg) - g_total ** 2 / (h_total + l2_reg)
    )
    gain = np.where(distinct, gain, -np.inf)

    best = int(np.argmax(gain))
    f, pos = divmod(best, m - 1)
    lower, upper = float(xs[f, pos]), float(xs[f, pos + 1])
    threshold = 0.5 * (lower + upper)
    if not threshold > lower:
        threshold = upper
    return float(gain[f, pos]), f, threshold


def _grow_tree(
    X: np.ndarray, order: np.ndarray, g: np.ndarray, h: np.ndarray, hp: GbdtHyperparams
) -> RegressionTree:
    builder = _TreeBuilder()

    def grow(member: np.ndarray, depth: int) -> int:
        if depth < hp.max_depth:
            found = _best_split(X, order, member, g, h, hp.l2_reg)
            if found is not None and found[0] - hp.min_split_gain > 0:
                gain, feature, threshold = found
                node = builder.split(feature, threshold, gain)
                goes_left = X[:, feature] < threshold
                left = grow(member & goes_left, depth + 1)
                right = grow(member & ~goes_left, depth + 1)
                builder.attach(node, left, right)
                return node
        weight = -float(g[member].sum()) / (float(h[member].sum()) + hp.l2_reg)
        return builder.leaf(hp.learning_rate * weight)

    grow(np.ones(X.shape[0], dtype=bool), 0)
    return builder.build()


def _encode_labels(y: Sequence[str], categories: Tuple[str, ...]) -> np.ndarray:
    index = {c: k for k, c in enumerate(categories)}
    try:
        return np.array([index[str(label)] for label in y], dtype=np.int64)
    except KeyError as exc:
        raise InvalidArgumentError(f"label {exc.args[0]!r} is not one of {list(categories)}") from exc


def cross_entropy(margins: np.ndarray, codes: np.ndarray) -> float:
    """Mean softmax cross-entropy of integer labels ``codes``"""
    log_p = log_softmax(margins, axis=1)
    return float(-np.mean(log_p[np.arange(codes.size), codes]))


def train(
    X: np.ndarray,
    y: Sequence[str],
    hp: GbdtHyperparams,
    feature_names: Optional[Sequence[str]] = None,
    categories: Optional[Sequence[str]] = None,
) -> GbdtModel:
    """
    Fit a boosted ensemble

    Args:
        X: ``(n_rows, n_features)`` finite feature matrix
        y: Label per row
        hp: Hyperparameters
        feature_names: Column names (default ``f0, f1, ...``)
        categories: Output category order (default: sorted distinct labels)

    Raises:
        DegenerateTrainingError: If fewer than two distinct labels are present
        InvalidArgumentError: On shape mismatch, non-finite values or unknown labels
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise InvalidArgumentError(f"feature matrix shape {X.shape} does not match {len(y)} labels")
    if not np.isfinite(X).all():
        raise InvalidArgumentError("feature matrix has non-finite values")
    names = tuple(feature_names) if feature_names is not None else tuple(f"f{i}" for i in range(X.shape[1]))
    if len(names) != X.shape[1]:
        raise InvalidArgumentError(f"{len(names)} feature names for {X.shape[1]} columns")

    distinct = sorted({str(label) for label in y})
    if len(distinct) < 2:
        raise DegenerateTrainingError(f"need at least two distinct labels, got {distinct}")
    cats = tuple(categories) if categories is not None else tuple(distinct)
    codes = _encode_labels(y, cats)

    n, k_count = X.shape[0], len(cats)
    onehot = np.zeros((n, k_count))
    onehot[np.arange(n), codes] = 1.0
    prior = onehot.mean(axis=0)
    base_margin = np.log(np.maximum(prior, _PRIOR_FLOOR))

    order = np.argsort(X, axis=0, kind="mergesort")
    margins = np.tile(base_margin, (n, 1))
    trees: List[List[RegressionTree]] = []
    losses: List[float] = []

    for _ in range(hp.n_rounds):
        p = softmax(margins, axis=1)
        round_trees = []
        for k in range(k_count):
            g = p[:, k] - onehot[:, k]
            h = np.maximum(p[:, k] * (1.0 - p[:, k]), MIN_HESSIAN)
            round_trees.append(_grow_tree(X, order, g, h, hp))
        for k, tree in enumerate(round_trees):
            margins[:, k] += tree.apply(X)
        trees.append(round_trees)
        losses.append(cross_entropy(margins, codes))

    logger.debug(
        "Trained %d rounds x %d categories on %d rows (%s), final loss %.6f",
        hp.n_rounds, k_count, n, hp.describe(), losses[-1],
    )
    return GbdtModel(cats, names, base_margin, trees, hp, losses)


def predict_proba(model: GbdtModel, X: np.ndarray) -> np.ndarray:
    """
    Category probabilities (softmax of summed margins)

    A single row returns a 1D vector; a matrix returns one row per input row.
    """
    single = np.asarray(X).ndim == 1
    probabilities = softmax(model.margins(X), axis=1)
    return probabilities[0] if single else probabilities


def predict(model: GbdtModel, X: np.ndarray) -> List[str]:
    """Most probable category per row; ties go to the earlier category"""
    probabilities = np.atleast_2d(predict_proba(model, X))
    return [model.categories[k] for k in np.argmax(probabilities, axis=1)]


def feature_importance(model: GbdtModel, normalize: bool = False) -> Dict[str, float]:
    """
    Total split gain per feature

    Features never split on get 0. With ``normalize`` the values sum to 1
    whenever the model has at least one split.
    """
    totals = np.zeros(len(model.feature_names))
    for round_trees in model.trees:
        for tree in round_trees:
            internal = tree.feature >= 0
            np.add.at(totals, tree.feature[internal], tree.gain[internal])
    if normalize and totals.sum() > 0:
        totals = totals / totals.sum()
    return {name: float(v) for name, v in zip(model.feature_names, totals)}
