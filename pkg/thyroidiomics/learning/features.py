"""
Feature tables and feature selection

``FeatureTable`` carries one row per case (case id, center, label) over named
feature columns. Selection runs in two stages: a Spearman correlation filter
that removes near-duplicate columns, then recursive feature elimination
driven by boosted-tree gain importance.
"""

import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import rankdata

from ..errors import InvalidArgumentError, InvalidRangeError, MissingFileError, SchemaError, UndefinedStatisticError
from ..utils.file_utils import write_text_atomic
from .gbdt import GbdtHyperparams, feature_importance, train

logger = logging.getLogger(__name__)

ID_COLUMNS = ("case_id", "center_id", "label")
CSV_FLOAT_FORMAT = "%.17g"
DEFAULT_THRESHOLD = 0.95
DEFAULT_K = 10


@dataclass(frozen=True, eq=False)
class FeatureTable:
    """
    Named feature columns for a set of cases

    Attributes:
        case_ids: Case identifier per row
        centers: Acquisition center per row
        labels: Pathology label per row (empty string when unknown)
        columns: Unique column names
        values: ``(n_rows, n_columns)`` finite float matrix
    """

    case_ids: Tuple[str, ...]
    centers: Tuple[int, ...]
    labels: Tuple[str, ...]
    columns: Tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1 and values.size == 0:
            values = values.reshape(0, len(self.columns))
        object.__setattr__(self, "case_ids", tuple(str(c) for c in self.case_ids))
        object.__setattr__(self, "centers", tuple(int(c) for c in self.centers))
        object.__setattr__(self, "labels", tuple(str(c) for c in self.labels))
        object.__setattr__(self, "columns", tuple(str(c) for c in self.columns))
        object.__setattr__(self, "values", values)

        n = len(self.case_ids)
        if len(self.centers) != n or len(self.labels) != n:
            raise SchemaError("case_ids, centers and labels must have equal lengths")
        if values.shape != (n, len(self.columns)):
            raise SchemaError(f"values shape {values.shape} does not match {n} rows x {len(self.columns)} columns")
        if len(set(self.columns)) != len(self.columns):
            raise SchemaError("column names must be unique")
        if not np.isfinite(values).all():
            raise SchemaError("feature table has missing or non-finite values")

    @property
    def n_rows(self) -> int:
        return len(self.case_ids)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]

    def select(self, columns: Sequence[str]) -> "FeatureTable":
        """Keep ``columns`` (in the given order)"""
        missing = [c for c in columns if c not in self.columns]
        if missing:
            raise InvalidArgumentError(f"unknown columns: {', '.join(missing)}")
        positions = [self.columns.index(c) for c in columns]
        return FeatureTable(self.case_ids, self.centers, self.labels, tuple(columns), self.values[:, positions])

    def rows(self, keep: Union[np.ndarray, Sequence[int]]) -> "FeatureTable":
        """Row subset from a boolean mask or index list"""
        index = np.arange(self.n_rows)[np.asarray(keep)]
        return FeatureTable(
            tuple(self.case_ids[i] for i in index),
            tuple(self.centers[i] for i in index),
            tuple(self.labels[i] for i in index),
            self.columns,
            self.values[index],
        )

    def with_values(self, values: np.ndarray) -> "FeatureTable":
        return FeatureTable(self.case_ids, self.centers, self.labels, self.columns, values)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, columns=list(self.columns))
        frame.insert(0, "label", list(self.labels))
        frame.insert(0, "center_id", list(self.centers))
        frame.insert(0, "case_id", list(self.case_ids))
        return frame

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the table as CSV with 17 significant digits"""
        buffer = io.StringIO()
        self.to_frame().to_csv(buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        write_text_atomic(Path(path), buffer.getvalue())

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "FeatureTable":
        path = Path(path)
        if not path.exists():
            raise MissingFileError(str(path))
        try:
            frame = pd.read_csv(
                path,
                float_precision="round_trip",
                dtype={"case_id": str, "label": str},
                keep_default_na=False,
            )
        except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
            raise SchemaError(f"{path}: {exc}") from exc
        return cls.from_frame(frame, source=str(path))

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, source: str = "frame") -> "FeatureTable":
        missing = [c for c in ID_COLUMNS if c not in frame.columns]
        if missing:
            raise SchemaError(f"{source}: missing columns {missing}")
        feature_columns = [c for c in frame.columns if c not in ID_COLUMNS]
        try:
            values = frame[feature_columns].apply(pd.to_numeric, errors="raise").to_numpy(dtype=np.float64)
            centers = frame["center_id"].astype(int).tolist()
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"{source}: {exc}") from exc
        return cls(
            tuple(frame["case_id"].tolist()),
            tuple(centers),
            tuple(frame["label"].tolist()),
            tuple(feature_columns),
            values,
        )

    @classmethod
    def concat(cls, tables: Sequence["FeatureTable"]) -> "FeatureTable":
        if not tables:
            raise InvalidArgumentError("nothing to concatenate")
        columns = tables[0].columns
        if any(t.columns != columns for t in tables):
            raise SchemaError("tables have different columns")
        return cls(
            tuple(c for t in tables for c in t.case_ids),
            tuple(c for t in tables for c in t.centers),
            tuple(c for t in tables for c in t.labels),
            columns,
            np.vstack([t.values for t in tables]),
        )


@dataclass(frozen=True, eq=False)
class ZScoreParams:
    """Per-column mean and population standard deviation fit on a training table"""

    columns: Tuple[str, ...]
    mean: np.ndarray
    sd: np.ndarray
    constant: Tuple[str, ...]

    def apply(self, table: FeatureTable) -> FeatureTable:
        if table.columns != self.columns:
            raise SchemaError("table columns differ from the fitted columns")
        scale = np.where(self.sd > 0, self.sd, 1.0)
        shift = np.where(self.sd > 0, self.mean, 0.0)
        return table.with_values((table.values - shift) / scale)

    def subset(self, columns: Sequence[str]) -> "ZScoreParams":
        """Parameters of ``columns`` only, in the given order"""
        missing = [c for c in columns if c not in self.columns]
        if missing:
            raise InvalidArgumentError(f"unknown columns: {', '.join(missing)}")
        positions = [self.columns.index(c) for c in columns]
        return ZScoreParams(
            tuple(columns),
            self.mean[positions],
            self.sd[positions],
            tuple(c for c in self.constant if c in columns),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "columns": list(self.columns),
            "mean": [float(v) for v in self.mean],
            "sd": [float(v) for v in self.sd],
            "constant": list(self.constant),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ZScoreParams":
        try:
            params = cls(
                tuple(str(c) for c in data["columns"]),
                np.array(data["mean"], dtype=np.float64),
                np.array(data["sd"], dtype=np.float64),
                tuple(str(c) for c in data.get("constant", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed standardization: {exc}") from exc
        if params.mean.shape != (len(params.columns),) or params.sd.shape != params.mean.shape:
            raise SchemaError("standardization arrays do not match the column count")
        return params


def fit_zscore(train_table: FeatureTable) -> ZScoreParams:
    """
    Estimate z-score parameters; constant columns are flagged and left unscaled
    """
    mean = train_table.values.mean(axis=0)
    sd = train_table.values.std(axis=0)
    tolerance = 1e-12 * np.maximum(1.0, np.abs(mean))
    is_constant = sd <= tolerance
    sd = np.where(is_constant, 0.0, sd)
    constant = tuple(c for c, flag in zip(train_table.columns, is_constant) if flag)
    if constant:
        logger.warning("Constant columns passed through unscaled: %s", ", ".join(constant))
    return ZScoreParams(train_table.columns, mean, sd, constant)


def table_zscore(train_table: FeatureTable, apply_to: FeatureTable) -> Tuple[FeatureTable, FeatureTable]:
    """Standardize both tables with parameters fit on ``train_table`` only"""
    params = fit_zscore(train_table)
    return params.apply(train_table), params.apply(apply_to)


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Spearman rank correlation (average ranks for ties)

    Raises:
        InvalidArgumentError: On length mismatch or fewer than two points
        UndefinedStatisticError: If either input is constant
    """
    x_arr = np.asarray(x, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64)
    if x_arr.shape != y_arr.shape or x_arr.ndim != 1:
        raise InvalidArgumentError("spearman_rho needs two 1D inputs of equal length")
    if x_arr.size < 2:
        raise InvalidArgumentError("spearman_rho needs at least two points")
    rx = rankdata(x_arr)
    ry = rankdata(y_arr)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denominator = np.sqrt(np.sum(dx ** 2) * np.sum(dy ** 2))
    if denominator == 0.0:
        raise UndefinedStatisticError("Spearman correlation of a constant input")
    return float(np.sum(dx * dy) / denominator)


def spearman_matrix(table: FeatureTable) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pairwise Spearman correlations of all columns

    Returns:
        ``(rho, constant)``; rows/columns of constant columns are NaN
    """
    ranks = rankdata(table.values, axis=0)
    centered = ranks - ranks.mean(axis=0)
    norms = np.sqrt(np.sum(centered ** 2, axis=0))
    constant = norms == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = centered / norms
        rho = unit.T @ unit
    rho[constant, :] = np.nan
    rho[:, constant] = np.nan
    return rho, constant


def correlation_filter(table: FeatureTable, threshold: float = DEFAULT_THRESHOLD) -> List[str]:
    """
    Drop near-duplicate columns

    Pairs ``(i, j)`` with ``i < j`` are scanned in column order; when
    ``|rho| > threshold`` and ``j`` is not already dropped, ``j`` is dropped.
    Pairs involving a constant column are skipped.

    Returns:
        Surviving column names in column order
    """
    if not 0.0 < threshold <= 1.0:
        raise InvalidRangeError(f"threshold must lie in (0, 1], got {threshold}")
    if table.n_rows < 2:
        raise InvalidArgumentError("correlation filter needs at least two rows")
    rho, constant = spearman_matrix(table)
    if constant.any():
        logger.warning(
            "Correlation filter skips constant columns: %s",
            ", ".join(c for c, flag in zip(table.columns, constant) if flag),
        )

    n = len(table.columns)
    dropped = np.zeros(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if not dropped[j] and not constant[i] and not constant[j] and abs(rho[i, j]) > threshold:
                dropped[j] = True
    kept = [c for c, d in zip(table.columns, dropped) if not d]
    logger.info("Correlation filter kept %d of %d columns (|rho| > %g)", len(kept), n, threshold)
    return kept


def rfe_select(
    table: FeatureTable,
    k: int = DEFAULT_K,
    hp: Optional[GbdtHyperparams] = None,
    categories: Optional[Sequence[str]] = None,
) -> Tuple[List[str], Dict[str, float]]:
    """
    Recursive feature elimination on gain importance

    Each round trains on the remaining columns and drops the single column with
    the smallest total gain; ties drop the later column.

    Returns:
        ``(selected, importances)``: the ``k`` survivors in column order and
        their normalized importances in the final model

    Raises:
        InvalidArgumentError: If ``k`` is outside ``[1, n_columns]``
    """
    hp = hp or GbdtHyperparams(n_rounds=20, max_depth=3, learning_rate=0.3)
    remaining = list(table.columns)
    if not 1 <= k <= len(remaining):
        raise InvalidArgumentError(f"k must lie in [1, {len(remaining)}], got {k}")

    while True:
        model = train(table.select(remaining).values, table.labels, hp, remaining, categories)
        importance = feature_importance(model)
        if len(remaining) == k:
            break
        gains = np.array([importance[c] for c in remaining])
        weakest = int(np.flatnonzero(gains == gains.min())[-1])
        logger.debug("RFE drops %s (gain %.6g), %d left", remaining[weakest], gains[weakest], len(remaining) - 1)
        del remaining[weakest]

    return remaining, feature_importance(model, normalize=True)


@dataclass(frozen=True)
class SelectionEntry:
    name: str
    count: int
    mean_importance: float


@dataclass(frozen=True)
class SelectionReport:
    """How often each feature was selected across folds and its mean importance when selected"""

    n_folds: int
    entries: Tuple[SelectionEntry, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_folds": self.n_folds,
            "features": [
                {"name": e.name, "count": e.count, "mean_importance": e.mean_importance}
                for e in self.entries
            ],
        }

    def rows(self) -> List[List[str]]:
        return [[e.name, str(e.count), f"{e.mean_importance:.4f}"] for e in self.entries]


def build_selection_report(selections: Sequence[Mapping[str, float]]) -> SelectionReport:
    """
    Aggregate per-fold selections (name -> importance) into a report

    Entries are ordered by count (descending), then mean importance
    (descending), then name.
    """
    if not selections:
        raise InvalidArgumentError("selection report needs at least one fold")
    collected: Dict[str, List[float]] = {}
    for fold in selections:
        for name, importance in fold.items():
            collected.setdefault(name, []).append(float(importance))
    entries = [SelectionEntry(name, len(v), float(np.mean(v))) for name, v in collected.items()]
    entries.sort(key=lambda e: (-e.count, -e.mean_importance, e.name))
    return SelectionReport(len(selections), tuple(entries))
