"""
Multiclass classification metrics

Confusion counts, one-vs-rest precision/recall/F1 with micro, macro and
weighted averages, ROC AUC (Mann-Whitney rank form) and PRC AUC (average
precision with tied scores handled as one block).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import rankdata

from ..errors import InvalidArgumentError, SchemaError, UndefinedStatisticError

logger = logging.getLogger(__name__)

CATEGORIES: Tuple[str, ...] = ("MNG", "TH", "DG")
AVERAGES: Tuple[str, ...] = ("micro", "macro", "weighted")
CLASS_METRICS: Tuple[str, ...] = ("precision", "recall", "f1", "roc_auc", "prc_auc")
CURVES = ("ROC", "PRC")
AUC_MODES = ("per-category", "micro", "macro", "weighted")

ProbabilityRows = Union[np.ndarray, Sequence[Sequence[float]]]


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Counts with rows = true category and columns = predicted category"""

    categories: Tuple[str, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {"categories": list(self.categories), "counts": self.counts.tolist()}


def _codes(labels: Sequence[str], categories: Sequence[str]) -> np.ndarray:
    index = {c: k for k, c in enumerate(categories)}
    unknown = sorted({str(v) for v in labels if str(v) not in index})
    if unknown:
        raise InvalidArgumentError(f"unknown labels {unknown}; expected one of {list(categories)}")
    return np.array([index[str(v)] for v in labels], dtype=np.int64)


def confusion(
    y_true: Sequence[str], y_pred: Sequence[str], categories: Sequence[str] = CATEGORIES
) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise InvalidArgumentError(f"{len(y_true)} true labels but {len(y_pred)} predictions")
    k = len(categories)
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (_codes(y_true, categories), _codes(y_pred, categories)), 1)
    return ConfusionMatrix(tuple(categories), counts)


def _ratio(numerator: float, denominator: float, what: str, flags: List[str]) -> float:
    if denominator == 0:
        flags.append(what)
        logger.warning("%s is 0/0, reported as 0", what)
        return 0.0
    return numerator / denominator


@dataclass
class ClasswiseMetrics:
    """Per-category precision/recall/F1/support, their averages and accuracy"""

    per_class: Dict[str, Dict[str, float]]
    averages: Dict[str, Dict[str, float]]
    accuracy: float
    flags: List[str] = field(default_factory=list)


def classwise_and_averaged(cm: ConfusionMatrix) -> ClasswiseMetrics:
    """
    One-vs-rest precision, recall and F1 per category with micro, macro and
    weighted averages; 0/0 is reported as 0 and flagged

    Raises:
        InvalidArgumentError: If the matrix is empty
    """
    total = cm.total
    if total == 0:
        raise InvalidArgumentError("confusion matrix has no cases")
    counts = cm.counts.astype(np.float64)
    tp = np.diag(counts)
    predicted = counts.sum(axis=0)
    support = counts.sum(axis=1)
    flags: List[str] = []

    per_class: Dict[str, Dict[str, float]] = {}
    for k, category in enumerate(cm.categories):
        precision = _ratio(tp[k], predicted[k], f"precision[{category}]", flags)
        recall = _ratio(tp[k], support[k], f"recall[{category}]", flags)
        f1 = _ratio(2 * precision * recall, precision + recall, f"f1[{category}]", flags)
        per_class[category] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": float(support[k]),
        }

    tp_total = float(tp.sum())
    micro_precision = tp_total / float(predicted.sum())
    micro_recall = tp_total / float(support.sum())
    micro_f1 = _ratio(2 * micro_precision * micro_recall, micro_precision + micro_recall, "f1[micro]", flags)
    weights = support / support.sum()

    averages = {
        "micro": {"precision": micro_precision, "recall": micro_recall, "f1": micro_f1},
        "macro": {
            name: float(np.mean([per_class[c][name] for c in cm.categories]))
            for name in ("precision", "recall", "f1")
        },
        "weighted": {
            name: float(np.sum([w * per_class[c][name] for w, c in zip(weights, cm.categories)]))
            for name in ("precision", "recall", "f1")
        },
    }
    return ClasswiseMetrics(per_class, averages, tp_total / total, flags)


def _binary_inputs(scores: Sequence[float], truth: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    t = np.asarray(truth).astype(bool)
    if s.shape != t.shape or s.ndim != 1:
        raise InvalidArgumentError("scores and truth must be 1D and of equal length")
    return s, t


def roc_auc(scores: Sequence[float], truth: Sequence[int]) -> float:
    """
    Area under the ROC curve: (concordant + 0.5 tied) / (P N) over positive/negative pairs

    Raises:
        UndefinedStatisticError: If truth has no positive or no negative
    """
    s, t = _binary_inputs(scores, truth)
    n_pos = int(t.sum())
    n_neg = int(t.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise UndefinedStatisticError("ROC AUC needs both positives and negatives")
    ranks = rankdata(s)
    return float((ranks[t].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def prc_auc(scores: Sequence[float], truth: Sequence[int]) -> float:
    """
    Average precision: sum over score thresholds (descending) of the recall
    increase times the precision at that threshold

    Raises:
        UndefinedStatisticError: If truth has no positive
    """
    s, t = _binary_inputs(scores, truth)
    n_pos = int(t.sum())
    if n_pos == 0:
        raise UndefinedStatisticError("PRC AUC needs at least one positive")
    order = np.argsort(-s, kind="mergesort")
    s_sorted = s[order]
    tp = np.cumsum(t[order])
    fp = np.cumsum(~t[order])
    block_end = np.append(np.flatnonzero(s_sorted[1:] != s_sorted[:-1]), s.size - 1)
    tp = tp[block_end].astype(np.float64)
    fp = fp[block_end].astype(np.float64)
    precision = tp / (tp + fp)
    recall = tp / n_pos
    recall_step = np.diff(np.concatenate([[0.0], recall]))
    return float(np.sum(recall_step * precision))


def _check_probabilities(probabilities: ProbabilityRows, n_categories: int) -> np.ndarray:
    p = np.asarray(probabilities, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != n_categories:
        raise InvalidArgumentError(f"probabilities must be (n, {n_categories}), got {p.shape}")
    if p.size and not np.allclose(p.sum(axis=1), 1.0, rtol=0.0, atol=1e-9):
        raise InvalidArgumentError("probability rows must sum to 1")
    return p


def per_category_auc(
    probabilities: ProbabilityRows,
    y_true: Sequence[str],
    categories: Sequence[str] = CATEGORIES,
    curve: str = "ROC",
) -> Dict[str, Optional[float]]:
    """One-vs-rest AUC per category; categories without positives (or negatives) get None"""
    if curve not in CURVES:
        raise InvalidArgumentError(f"curve must be one of {CURVES}, got {curve!r}")
    p = _check_probabilities(probabilities, len(categories))
    codes = _codes(y_true, categories)
    auc = roc_auc if curve == "ROC" else prc_auc
    result: Dict[str, Optional[float]] = {}
    for k, category in enumerate(categories):
        truth = codes == k
        try:
            result[category] = auc(p[:, k], truth)
        except UndefinedStatisticError:
            logger.warning("%s AUC undefined for %s (no positive or no negative case)", curve, category)
            result[category] = None
    return result


def multiclass_auc(
    probabilities: ProbabilityRows,
    y_true: Sequence[str],
    categories: Sequence[str] = CATEGORIES,
    mode: str = "macro",
    curve: str = "ROC",
) -> Union[Dict[str, Optional[float]], Optional[float]]:
    """
    ROC or PRC AUC of a multiclass probability matrix

    ``per-category`` returns a dict; ``macro`` and ``weighted`` average the
    defined categories (unweighted, or by support); ``micro`` scores the
    flattened ``(case, category)`` indicator/probability pairs as one binary
    problem. Returns None when nothing is defined.
    """
    if mode not in AUC_MODES:
        raise InvalidArgumentError(f"mode must be one of {AUC_MODES}, got {mode!r}")
    if curve not in CURVES:
        raise InvalidArgumentError(f"curve must be one of {CURVES}, got {curve!r}")
    if mode == "micro":
        p = _check_probabilities(probabilities, len(categories))
        codes = _codes(y_true, categories)
        indicator = np.zeros_like(p, dtype=bool)
        indicator[np.arange(codes.size), codes] = True
        auc = roc_auc if curve == "ROC" else prc_auc
        try:
            return auc(p.ravel(), indicator.ravel())
        except UndefinedStatisticError:
            return None

    per_category = per_category_auc(probabilities, y_true, categories, curve)
    if mode == "per-category":
        return per_category
    return _average_auc(per_category, y_true, mode)


def _average_auc(per_category: Dict[str, Optional[float]], y_true: Sequence[str], mode: str) -> Optional[float]:
    defined = [c for c, v in per_category.items() if v is not None]
    if not defined:
        return None
    values = np.array([per_category[c] for c in defined], dtype=np.float64)
    if mode == "macro":
        return float(values.mean())
    support = np.array([sum(1 for v in y_true if str(v) == c) for c in defined], dtype=np.float64)
    return float(np.sum(values * support) / support.sum())


@dataclass
class MetricsReport:
    """
    Class-wise and averaged metrics of one scored set (usually one center)

    AUC values that are undefined for a category are ``None``.
    """

    center_id: Optional[int]
    n_cases: int
    categories: Tuple[str, ...]
    per_class: Dict[str, Dict[str, Optional[float]]]
    averages: Dict[str, Dict[str, Optional[float]]]
    accuracy: float
    confusion: List[List[int]]
    flags: List[str] = field(default_factory=list)

    def value(self, metric: str, category: str) -> Optional[float]:
        """A class-wise (``category`` in categories) or averaged (micro/macro/weighted) metric"""
        if metric == "accuracy":
            return self.accuracy
        table = self.per_class if category in self.per_class else self.averages
        if category not in table or metric not in table[category]:
            raise InvalidArgumentError(f"no metric {metric!r} for {category!r}")
        return table[category][metric]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "center_id": self.center_id,
            "n_cases": self.n_cases,
            "categories": list(self.categories),
            "per_class": self.per_class,
            "averages": self.averages,
            "accuracy": self.accuracy,
            "confusion": self.confusion,
            "flags": self.flags,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricsReport":
        try:
            return cls(
                center_id=data.get("center_id"),
                n_cases=int(data["n_cases"]),
                categories=tuple(data.get("categories", CATEGORIES)),
                per_class={k: dict(v) for k, v in data["per_class"].items()},
                averages={k: dict(v) for k, v in data["averages"].items()},
                accuracy=float(data["accuracy"]),
                confusion=[list(map(int, row)) for row in data.get("confusion", [])],
                flags=list(data.get("flags", [])),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SchemaError(f"malformed metrics report: {exc}") from exc


def build_metrics_report(
    center_id: Optional[int],
    y_true: Sequence[str],
    probabilities: ProbabilityRows,
    categories: Sequence[str] = CATEGORIES,
) -> MetricsReport:
    """
    Score probability rows against true labels

    The predicted category is the argmax of each row, ties going to the
    earlier category.
    """
    cats = tuple(categories)
    p = _check_probabilities(probabilities, len(cats))
    if p.shape[0] != len(y_true):
        raise InvalidArgumentError(f"{p.shape[0]} probability rows for {len(y_true)} labels")
    y_pred = [cats[k] for k in np.argmax(p, axis=1)]
    cm = confusion(y_true, y_pred, cats)
    classwise = classwise_and_averaged(cm)

    per_class: Dict[str, Dict[str, Optional[float]]] = {c: dict(v) for c, v in classwise.per_class.items()}
    averages: Dict[str, Dict[str, Optional[float]]] = {a: dict(v) for a, v in classwise.averages.items()}
    flags = list(classwise.flags)
    for curve, key in (("ROC", "roc_auc"), ("PRC", "prc_auc")):
        per_category = per_category_auc(p, y_true, cats, curve)
        for category, value in per_category.items():
            per_class[category][key] = value
            if value is None:
                flags.append(f"{key}[{category}]")
        for mode in AVERAGES:
            if mode == "micro":
                averages[mode][key] = multiclass_auc(p, y_true, cats, mode, curve)  # type: ignore[assignment]
            else:
                averages[mode][key] = _average_auc(per_category, y_true, mode)

    return MetricsReport(
        center_id=center_id,
        n_cases=len(y_true),
        categories=cats,
        per_class=per_class,
        averages=averages,
        accuracy=classwise.accuracy,
        confusion=cm.counts.tolist(),
        flags=flags,
    )
