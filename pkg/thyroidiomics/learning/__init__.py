"""
Feature tables, feature selection and the boosted-tree classifier
"""

from .features import (
    FeatureTable,
    SelectionReport,
    ZScoreParams,
    build_selection_report,
    correlation_filter,
    fit_zscore,
    rfe_select,
    spearman_rho,
    table_zscore,
)
from .gbdt import GbdtHyperparams, GbdtModel, feature_importance, predict, predict_proba, train
from .model_selection import default_lattice, grid_search_cv, lattice_from_axes, stratified_folds

__all__ = [
    "FeatureTable",
    "GbdtHyperparams",
    "GbdtModel",
    "SelectionReport",
    "ZScoreParams",
    "build_selection_report",
    "correlation_filter",
    "default_lattice",
    "feature_importance",
    "fit_zscore",
    "grid_search_cv",
    "lattice_from_axes",
    "predict",
    "predict_proba",
    "rfe_select",
    "spearman_rho",
    "stratified_folds",
    "table_zscore",
    "train",
]
