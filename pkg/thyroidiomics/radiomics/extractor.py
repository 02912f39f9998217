"""
Full 93-feature extraction for one case
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Tuple

import numpy as np

from ..errors import ExtractionError, ThyroidiomicsError
from ..imaging.discretize import DiscretizedRoi, discretize_roi
from ..imaging.grid import BinaryMask, ImageGrid
from ..imaging.preprocessing import prepare_for_radiomics
from .base import FAMILIES, ExtractionConfig, family_of, feature_names
from .first_order import first_order_features
from .glcm import compute_glcm, glcm_features
from .gldm import gldm_features
from .glrlm import glrlm_features
from .glszm import glszm_features
from .ngtdm import ngtdm_features

logger = logging.getLogger(__name__)

_TEXTURE_FAMILIES: Dict[str, Callable[[DiscretizedRoi, ExtractionConfig], Dict[str, float]]] = {
    "GLCM": lambda droi, cfg: glcm_features(compute_glcm(droi, cfg)),
    "GLDM": gldm_features,
    "GLRLM": glrlm_features,
    "GLSZM": lambda droi, cfg: glszm_features(droi),
    "NGTDM": ngtdm_features,
}


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """The 93 named radiomics values of one case, in canonical order"""

    case_id: str
    names: Tuple[str, ...]
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[Tuple[str, float]]:
        return iter(zip(self.names, (float(v) for v in self.values)))

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])

    def family_counts(self) -> Dict[str, int]:
        counts = {family: 0 for family in FAMILIES}
        for name in self.names:
            counts[family_of(name)] += 1
        return counts


def extract_all(
    img: ImageGrid,
    mask: BinaryMask,
    cfg: ExtractionConfig = ExtractionConfig(),
    case_id: str = "",
) -> FeatureVector:
    """
    Extract every feature family from an already preprocessed case

    Raises:
        ExtractionError: If any family is degenerate for this ROI, naming the reason
    """
    try:
        collected = {
            f"FO_{name}": value
            for name, value in first_order_features(img, mask, cfg.bin_width).items()
        }
        droi = discretize_roi(img, mask, cfg.bin_width)
        for family, compute in _TEXTURE_FAMILIES.items():
            for name, value in compute(droi, cfg).items():
                collected[f"{family}_{name}"] = value
    except ThyroidiomicsError as exc:
        raise ExtractionError(case_id, str(exc)) from exc

    names = feature_names()
    values = np.array([collected[name] for name in names], dtype=np.float64)
    bad = [name for name, value in zip(names, values) if not np.isfinite(value)]
    if bad:
        raise ExtractionError(case_id, f"non-finite feature values: {', '.join(bad)}")

    logger.debug("Extracted %d features for %s (%d ROI pixels)", len(names), case_id, droi.n_pixels)
    return FeatureVector(case_id, tuple(names), values)


def extract_case(
    img: ImageGrid,
    mask: BinaryMask,
    cfg: ExtractionConfig = ExtractionConfig(),
    case_id: str = "",
) -> FeatureVector:
    """Radiomics preprocessing (z-score, resampling) followed by ``extract_all``"""
    try:
        image, roi = prepare_for_radiomics(
            img, mask, spacing=cfg.resampled_spacing, method=cfg.interpolator, normalize=cfg.normalize
        )
    except ThyroidiomicsError as exc:
        raise ExtractionError(case_id, str(exc)) from exc
    return extract_all(image, roi, cfg, case_id)


def feature_vector_rows(vectors: List[FeatureVector]) -> np.ndarray:
    """Stack vectors into an ``(n_cases, 93)`` array"""
    if not vectors:
        return np.zeros((0, len(feature_names())), dtype=np.float64)
    return np.vstack([v.values for v in vectors])
