"""
Leave-one-center-out cross-validation

Every center is held out once. The training split goes through z-scoring,
the correlation filter, RFE and grid search; the held-out center is then
scored. Scenario 1 tests on features from physician masks; scenario 2 tests
the same trained pipeline on features from predicted masks. Training always
uses physician masks.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import FoldError, InvalidArgumentError
from ..evaluation.metrics import AVERAGES, CATEGORIES, CLASS_METRICS, MetricsReport, build_metrics_report
from ..learning.features import (
    DEFAULT_K,
    DEFAULT_THRESHOLD,
    FeatureTable,
    SelectionReport,
    ZScoreParams,
    build_selection_report,
    correlation_filter,
    fit_zscore,
    rfe_select,
)
from ..learning.gbdt import GbdtHyperparams, GbdtModel, predict_proba, train
from ..learning.model_selection import DEFAULT_FOLDS, grid_search_cv, resolve_lattice, with_seed
from ..radiomics.base import ExtractionConfig
from ..utils.parallel import ordered_map
from ..utils.rng import derive_seed
from .extraction import ExtractionFailure, extract_manifest
from .manifest import DatasetManifest

logger = logging.getLogger(__name__)

SCENARIOS = (1, 2)
RFE_HYPERPARAMS = GbdtHyperparams(n_rounds=20, max_depth=3, learning_rate=0.3)


@dataclass(frozen=True)
class LococvConfig:
    """
    Per-fold pipeline settings

    Attributes:
        threshold: Spearman |rho| above which the later column is dropped
        k: Features kept by RFE
        rfe_hyperparams: Boosting settings of the RFE importance model
        lattice: Preset name or axes mapping for the grid search
        folds: Grid-search CV folds
        seed: Global seed; each held-out center derives its own
        extraction: Radiomics settings
    """

    threshold: float = DEFAULT_THRESHOLD
    k: int = DEFAULT_K
    rfe_hyperparams: GbdtHyperparams = RFE_HYPERPARAMS
    lattice: Any = "default"
    folds: int = DEFAULT_FOLDS
    seed: int = 0
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)

    def grid(self) -> List[GbdtHyperparams]:
        return resolve_lattice(self.lattice)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LococvConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        if isinstance(known.get("rfe_hyperparams"), dict):
            known["rfe_hyperparams"] = GbdtHyperparams.from_dict(known["rfe_hyperparams"])
        if isinstance(known.get("extraction"), dict):
            known["extraction"] = ExtractionConfig.from_dict(known["extraction"])
        config = cls(**known)
        config.grid()
        return config

    def to_dict(self) -> Dict[str, Any]:
        return {
            "threshold": self.threshold,
            "k": self.k,
            "rfe_hyperparams": self.rfe_hyperparams.to_dict(),
            "lattice": self.lattice,
            "folds": self.folds,
            "seed": self.seed,
            "extraction": self.extraction.to_dict(),
        }


def split_lococv(manifest: DatasetManifest) -> List[Tuple[int, List[str], List[str]]]:
    """
    ``(center, train case ids, test case ids)`` per center, centers ascending

    Raises:
        FoldError: With fewer than two centers
    """
    centers = manifest.centers
    if len(centers) < 2:
        raise FoldError(f"leave-one-center-out needs at least two centers, got {len(centers)}")
    return [
        (
            center,
            [c.case_id for c in manifest.cases if c.center_id != center],
            [c.case_id for c in manifest.cases if c.center_id == center],
        )
        for center in centers
    ]


@dataclass(frozen=True, eq=False)
class FoldModel:
    """Everything fit on one training split"""

    zscore: ZScoreParams
    dropped: Tuple[str, ...]
    selected: Tuple[str, ...]
    importances: Dict[str, float]
    hyperparams: GbdtHyperparams
    model: GbdtModel
    n_train: int


@dataclass
class FoldResult:
    center_id: int
    n_train: int
    n_test: int
    dropped_by_correlation: List[str]
    selected: List[str]
    importances: Dict[str, float]
    hyperparams: GbdtHyperparams
    metrics: Optional[MetricsReport]
    predictions: List[Dict[str, Any]]
    train_failures: List[str] = field(default_factory=list)
    test_failures: List[str] = field(default_factory=list)
    skipped: Optional[str] = None

    @property
    def scored(self) -> bool:
        """False when no test case of the center could be scored"""
        return self.metrics is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "center_id": self.center_id,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "train_failures": self.train_failures,
            "test_failures": self.test_failures,
            "dropped_by_correlation": self.dropped_by_correlation,
            "selected": self.selected,
            "importances": self.importances,
            "hyperparams": self.hyperparams.to_dict(),
            "metrics": self.metrics.to_dict() if self.metrics is not None else None,
            "skipped": self.skipped,
            "predictions": self.predictions,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FoldResult":
        return cls(
            center_id=int(data["center_id"]),
            n_train=int(data["n_train"]),
            n_test=int(data["n_test"]),
            dropped_by_correlation=list(data["dropped_by_correlation"]),
            selected=list(data["selected"]),
            importances=dict(data["importances"]),
            hyperparams=GbdtHyperparams.from_dict(data["hyperparams"]),
            metrics=MetricsReport.from_dict(data["metrics"]) if data.get("metrics") is not None else None,
            predictions=list(data["predictions"]),
            train_failures=list(data.get("train_failures", [])),
            test_failures=list(data.get("test_failures", [])),
            skipped=data.get("skipped"),
        )


def fit_fold(train_table: FeatureTable, config: LococvConfig, fold_seed: int) -> FoldModel:
    """
    Fit the whole selection and training pipeline on one training split
    """
    zscore = fit_zscore(train_table)
    standardized = zscore.apply(train_table)

    kept = correlation_filter(standardized, config.threshold)
    dropped = tuple(c for c in standardized.columns if c not in kept)
    k = config.k
    if len(kept) < k:
        logger.warning("Only %d columns survive the correlation filter; keeping all (k=%d)", len(kept), k)
        k = len(kept)

    filtered = standardized.select(kept)
    selected, importances = rfe_select(filtered, k, config.rfe_hyperparams, CATEGORIES)
    X = filtered.select(selected).values

    best = grid_search_cv(X, filtered.labels, config.grid(), config.folds, fold_seed, CATEGORIES, workers=1)
    hyperparams = with_seed(best, fold_seed)
    model = train(X, filtered.labels, hyperparams, selected, CATEGORIES)
    return FoldModel(zscore, dropped, tuple(selected), importances, hyperparams, model, train_table.n_rows)


def score_fold(fitted: FoldModel, test_table: FeatureTable, center_id: int) -> FoldResult:
    """
    Score the held-out center with a fitted fold pipeline

    A center with no case left to score (every extraction failed) comes back
    as a skipped fold without metrics.
    """
    if test_table.n_rows == 0:
        logger.warning("Center %d has no case left to score; fold skipped", center_id)
        return FoldResult(
            center_id=center_id,
            n_train=fitted.n_train,
            n_test=0,
            dropped_by_correlation=list(fitted.dropped),
            selected=list(fitted.selected),
            importances=dict(fitted.importances),
            hyperparams=fitted.hyperparams,
            metrics=None,
            predictions=[],
            skipped="no test case left after extraction failures",
        )
    X = fitted.zscore.apply(test_table).select(list(fitted.selected)).values
    probabilities = np.atleast_2d(predict_proba(fitted.model, X))
    report = build_metrics_report(center_id, test_table.labels, probabilities, CATEGORIES)

    predictions = []
    for case_id, label, row in zip(test_table.case_ids, test_table.labels, probabilities):
        predictions.append(
            {
                "case_id": case_id,
                "label": label,
                "predicted": CATEGORIES[int(np.argmax(row))],
                "probabilities": {c: float(p) for c, p in zip(CATEGORIES, row)},
            }
        )

    return FoldResult(
        center_id=center_id,
        n_train=fitted.n_train,
        n_test=test_table.n_rows,
        dropped_by_correlation=list(fitted.dropped),
        selected=list(fitted.selected),
        importances=dict(fitted.importances),
        hyperparams=fitted.hyperparams,
        metrics=report,
        predictions=predictions,
    )


def run_fold(
    train_table: FeatureTable, test_table: FeatureTable, config: LococvConfig, fold_seed: int
) -> FoldResult:
    """Fit on ``train_table`` and score ``test_table`` (one held-out center)"""
    centers = sorted(set(test_table.centers))
    if len(centers) != 1:
        raise FoldError(f"test split must hold exactly one center, got {centers}")
    if centers[0] in train_table.centers:
        raise FoldError(f"center {centers[0]} appears in both splits")
    return score_fold(fit_fold(train_table, config, fold_seed), test_table, centers[0])


def _center_job(
    job: Tuple[int, FeatureTable, Dict[int, FeatureTable], LococvConfig]
) -> Dict[int, FoldResult]:
    center, train_table, test_tables, config = job
    fitted = fit_fold(train_table, config, derive_seed(config.seed, center))
    return {scenario: score_fold(fitted, table, center) for scenario, table in test_tables.items()}


def _failed_ids(failures: Sequence[ExtractionFailure], in_center: bool, center: int) -> List[str]:
    return [f.case_id for f in failures if (f.center_id == center) == in_center]


def run_scenarios(
    manifest: DatasetManifest,
    scenarios: Sequence[int],
    config: LococvConfig,
    workers: Optional[int] = None,
) -> Dict[int, List[FoldResult]]:
    """
    Run several scenarios, fitting each fold's pipeline once

    Returns:
        Fold results per scenario, centers ascending

    Raises:
        MissingFileError: If scenario 2 is requested and a predicted mask is absent
        FoldError: With fewer than two centers
    """
    unknown = [s for s in scenarios if s not in SCENARIOS]
    if unknown or not scenarios:
        raise InvalidArgumentError(f"scenarios must be drawn from {SCENARIOS}, got {list(scenarios)}")
    scenarios = sorted(set(scenarios))
    folds = split_lococv(manifest)
    manifest.check_files(require_predicted=2 in scenarios)

    physician, physician_failures = extract_manifest(manifest, "physician", config.extraction, workers)
    test_sources = {1: (physician, physician_failures)}
    if 2 in scenarios:
        test_sources[2] = extract_manifest(manifest, "predicted", config.extraction, workers)

    jobs = []
    for center, _, _ in folds:
        in_center = np.array([c == center for c in physician.centers], dtype=bool)
        train_table = physician.rows(~in_center)
        test_tables = {}
        for scenario in scenarios:
            table, _ = test_sources[scenario]
            test_tables[scenario] = table.rows(np.array([c == center for c in table.centers], dtype=bool))
        jobs.append((center, train_table, test_tables, config))

    logger.info("Running %d folds for scenarios %s", len(jobs), scenarios)
    outcomes = ordered_map(_center_job, jobs, workers)

    results: Dict[int, List[FoldResult]] = {scenario: [] for scenario in scenarios}
    for (center, _, _), outcome in zip(folds, outcomes):
        for scenario in scenarios:
            result = outcome[scenario]
            result.train_failures = _failed_ids(physician_failures, False, center)
            result.test_failures = _failed_ids(test_sources[scenario][1], True, center)
            results[scenario].append(result)
    return results


def run_scenario(
    manifest: DatasetManifest, scenario: int, config: LococvConfig, workers: Optional[int] = None
) -> List[FoldResult]:
    """Leave-one-center-out results of one scenario, centers ascending"""
    return run_scenarios(manifest, [scenario], config, workers)[scenario]


def _mean_sd(values: List[float]) -> Dict[str, Any]:
    if not values:
        return {"mean": None, "sd": None, "n": 0}
    sd = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return {"mean": float(np.mean(values)), "sd": sd, "n": len(values)}


@dataclass
class LococvSummary:
    """Across-center mean and sd of every metric plus the feature-selection report"""

    centers: List[int]
    accuracy: Dict[str, Any]
    per_class: Dict[str, Dict[str, Dict[str, Any]]]
    averages: Dict[str, Dict[str, Dict[str, Any]]]
    selection: SelectionReport
    train_failures: int
    test_failures: int
    skipped_centers: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_folds": len(self.centers),
            "centers": self.centers,
            "skipped_centers": self.skipped_centers,
            "accuracy": self.accuracy,
            "per_class": self.per_class,
            "averages": self.averages,
            "failures": {"train": self.train_failures, "test": self.test_failures},
        }


def aggregate(results: Sequence[FoldResult]) -> LococvSummary:
    """
    Mean and sample sd (``n - 1``) of each metric across scored folds

    Undefined values are left out of their metric's statistics. Skipped folds
    add no metrics but are listed, and their failed cases are counted. Folds
    are reduced in center order, so the summary does not depend on input order.
    """
    if not results:
        raise InvalidArgumentError("nothing to aggregate")
    ordered = sorted(results, key=lambda r: r.center_id)
    reports = [r.metrics for r in ordered if r.metrics is not None]

    def collect(metric: str, category: str) -> Dict[str, Any]:
        values = [report.value(metric, category) for report in reports]
        return _mean_sd([float(v) for v in values if v is not None])

    per_class = {c: {m: collect(m, c) for m in CLASS_METRICS} for c in CATEGORIES}
    averages = {a: {m: collect(m, a) for m in CLASS_METRICS} for a in AVERAGES}
    selection = build_selection_report([r.importances for r in ordered])
    return LococvSummary(
        centers=[r.center_id for r in ordered if r.scored],
        accuracy=_mean_sd([report.accuracy for report in reports]),
        per_class=per_class,
        averages=averages,
        selection=selection,
        train_failures=len({f for r in ordered for f in r.train_failures}),
        test_failures=sum(len(r.test_failures) for r in ordered),
        skipped_centers=[r.center_id for r in ordered if not r.scored],
    )
