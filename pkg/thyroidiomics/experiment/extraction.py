"""
Feature extraction over a whole manifest
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from ..errors import ExtractionError, SchemaError
from ..imaging.grid import BinaryMask, ImageGrid
from ..imaging.scin_io import read_scin
from ..learning.features import FeatureTable
from ..radiomics.base import ExtractionConfig, feature_names
from ..radiomics.extractor import FeatureVector, extract_case, feature_vector_rows
from ..utils.parallel import ordered_map
from .manifest import CaseRecord, DatasetManifest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtractionFailure:
    case_id: str
    center_id: int
    reason: str


def load_case(case: CaseRecord, mask_source: str = "physician") -> Tuple[ImageGrid, BinaryMask]:
    """
    Read a case's image and the requested mask

    Raises:
        SchemaError: If the image is stored as a mask or the mask as an image
    """
    image = read_scin(case.image)
    mask = read_scin(case.mask(mask_source))
    if isinstance(image, BinaryMask):
        raise SchemaError(f"{case.image}: expected an image, found a u8 mask")
    if not isinstance(mask, BinaryMask):
        raise SchemaError(f"{case.mask(mask_source)}: expected a u8 mask")
    return image, mask


def _extract_job(job: Tuple[CaseRecord, str, ExtractionConfig]) -> Union[FeatureVector, ExtractionFailure]:
    case, mask_source, cfg = job
    image, mask = load_case(case, mask_source)
    try:
        return extract_case(image, mask, cfg, case.case_id)
    except ExtractionError as exc:
        return ExtractionFailure(case.case_id, case.center_id, exc.reason)


def extract_manifest(
    manifest: DatasetManifest,
    mask_source: str = "physician",
    cfg: ExtractionConfig = ExtractionConfig(),
    workers: Optional[int] = None,
    cases: Optional[Sequence[CaseRecord]] = None,
) -> Tuple[FeatureTable, List[ExtractionFailure]]:
    """
    Extract the 93 features of every case (or of ``cases``)

    Cases whose ROI is degenerate are left out of the table and returned as
    failures; missing or malformed files still raise.

    Returns:
        ``(table, failures)`` with table rows in manifest order
    """
    selected = list(cases) if cases is not None else list(manifest.cases)
    outcomes = ordered_map(_extract_job, [(case, mask_source, cfg) for case in selected], workers)

    kept: List[Tuple[CaseRecord, FeatureVector]] = []
    failures: List[ExtractionFailure] = []
    for case, outcome in zip(selected, outcomes):
        if isinstance(outcome, ExtractionFailure):
            logger.warning("Extraction failed for %s: %s", outcome.case_id, outcome.reason)
            failures.append(outcome)
        else:
            kept.append((case, outcome))

    table = FeatureTable(
        case_ids=tuple(case.case_id for case, _ in kept),
        centers=tuple(case.center_id for case, _ in kept),
        labels=tuple(case.label for case, _ in kept),
        columns=tuple(feature_names()),
        values=feature_vector_rows([vector for _, vector in kept]),
    )
    logger.info(
        "Extracted %d cases from %s masks (%d failed)", table.n_rows, mask_source, len(failures)
    )
    return table, failures
