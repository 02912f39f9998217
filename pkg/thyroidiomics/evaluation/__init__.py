"""
Classification metrics and equivalence statistics
"""

from .metrics import (
    CATEGORIES,
    ConfusionMatrix,
    MetricsReport,
    build_metrics_report,
    classwise_and_averaged,
    confusion,
    multiclass_auc,
    prc_auc,
    roc_auc,
)
from .stats import TostResult, tost_compare, tost_paired, tost_table

__all__ = [
    "CATEGORIES",
    "ConfusionMatrix",
    "MetricsReport",
    "TostResult",
    "build_metrics_report",
    "classwise_and_averaged",
    "confusion",
    "multiclass_auc",
    "prc_auc",
    "roc_auc",
    "tost_compare",
    "tost_paired",
    "tost_table",
]
