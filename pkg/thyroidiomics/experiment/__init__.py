"""
Dataset manifests, the synthetic phantom and the leave-one-center-out harness
"""

from .extraction import ExtractionFailure, extract_manifest, load_case
from .lococv import FoldResult, LococvConfig, aggregate, run_fold, run_scenario, run_scenarios, split_lococv
from .manifest import CaseRecord, DatasetManifest, load_manifest, save_manifest
from .phantom import PhantomSpec, generate_dataset
from .reports import dsc_report, roi_count_table

__all__ = [
    "CaseRecord",
    "DatasetManifest",
    "ExtractionFailure",
    "FoldResult",
    "LococvConfig",
    "PhantomSpec",
    "aggregate",
    "dsc_report",
    "extract_manifest",
    "generate_dataset",
    "load_case",
    "load_manifest",
    "roi_count_table",
    "run_fold",
    "run_scenario",
    "run_scenarios",
    "save_manifest",
    "split_lococv",
]
