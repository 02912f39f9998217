"""
Dataset-level segmentation reports: DSC of predicted masks and ROI count totals
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import MissingFileError
from ..segmentation.evaluation import dsc, roi_counts
from ..utils.parallel import ordered_map
from .extraction import load_case
from .manifest import CaseRecord, DatasetManifest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaseDsc:
    case_id: str
    center_id: int
    label: str
    dsc: float


def _mean_by(entries: List[CaseDsc], key: str) -> Dict[str, float]:
    groups: Dict[str, List[float]] = {}
    for entry in entries:
        groups.setdefault(str(getattr(entry, key)), []).append(entry.dsc)
    return {name: float(np.mean(values)) for name, values in sorted(groups.items())}


@dataclass(frozen=True)
class DscReport:
    """Per-case DSC of predicted against physician masks with label and center means"""

    cases: Tuple[CaseDsc, ...]

    @property
    def mean(self) -> float:
        return float(np.mean([c.dsc for c in self.cases])) if self.cases else float("nan")

    def per_label(self) -> Dict[str, float]:
        return _mean_by(list(self.cases), "label")

    def per_center(self) -> Dict[str, float]:
        return _mean_by(list(self.cases), "center_id")

    def per_label_over_centers(self) -> Dict[str, float]:
        """Label means of the per-center label means"""
        result = {}
        for label in sorted({c.label for c in self.cases}):
            entries = [c for c in self.cases if c.label == label]
            result[label] = float(np.mean(list(_mean_by(entries, "center_id").values())))
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_cases": len(self.cases),
            "mean": self.mean,
            "per_label": self.per_label(),
            "per_label_over_centers": self.per_label_over_centers(),
            "per_center": self.per_center(),
            "cases": [
                {"case_id": c.case_id, "center_id": c.center_id, "label": c.label, "dsc": c.dsc}
                for c in self.cases
            ],
        }


def _case_dsc(case: CaseRecord) -> CaseDsc:
    _, physician = load_case(case, "physician")
    _, predicted = load_case(case, "predicted")
    return CaseDsc(case.case_id, case.center_id, case.label, dsc(predicted, physician))


def dsc_report(manifest: DatasetManifest, workers: Optional[int] = None) -> DscReport:
    """
    Raises:
        MissingFileError: If a case has no predicted mask
    """
    missing = [c.case_id for c in manifest.cases if c.predicted_mask is None]
    if missing:
        raise MissingFileError(f"no predicted mask for {len(missing)} cases (first: {missing[0]})")
    entries = ordered_map(_case_dsc, manifest.cases, workers)
    report = DscReport(tuple(entries))
    logger.info("Mean DSC over %d cases: %.4f", len(entries), report.mean)
    return report


@dataclass(frozen=True)
class CaseCounts:
    case_id: str
    center_id: int
    label: str
    counts: float


def _case_counts(job: Tuple[CaseRecord, str]) -> CaseCounts:
    case, source = job
    image, mask = load_case(case, source)
    return CaseCounts(case.case_id, case.center_id, case.label, roi_counts(image, mask))


def roi_count_table(
    manifest: DatasetManifest, mask_source: str = "physician", workers: Optional[int] = None
) -> List[CaseCounts]:
    """Total raw counts inside each case's mask, in manifest order"""
    return ordered_map(_case_counts, [(case, mask_source) for case in manifest.cases], workers)
