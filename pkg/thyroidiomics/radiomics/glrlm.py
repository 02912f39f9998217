"""
Gray Level Run Length Matrix (GLRLM) features

A run is a maximal chain of equal-level ROI pixels along one direction; leaving
the ROI ends a run. Features are computed per direction and averaged.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np

from ..imaging.discretize import DiscretizedRoi
from .base import ExtractionConfig, TextureMatrix
from .emphasis import count_matrix, emphasis_statistics

logger = logging.getLogger(__name__)

_NAMES = {
    "small": "ShortRunEmphasis",
    "large": "LongRunEmphasis",
    "gln": "GrayLevelNonUniformity",
    "glnn": "GrayLevelNonUniformityNormalized",
    "sn": "RunLengthNonUniformity",
    "snn": "RunLengthNonUniformityNormalized",
    "percentage": "RunPercentage",
    "glv": "GrayLevelVariance",
    "sv": "RunVariance",
    "entropy": "RunEntropy",
    "low": "LowGrayLevelRunEmphasis",
    "high": "HighGrayLevelRunEmphasis",
    "small_low": "ShortRunLowGrayLevelEmphasis",
    "small_high": "ShortRunHighGrayLevelEmphasis",
    "large_low": "LongRunLowGrayLevelEmphasis",
    "large_high": "LongRunHighGrayLevelEmphasis",
}


def runs(droi: DiscretizedRoi, dx: int, dy: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Level and length of every run along ``(dx, dy)``

    Returns:
        ``(levels, lengths)`` with one entry per run
    """
    r = max(abs(dx), abs(dy))
    padded = np.pad(droi.level_image(), r)
    ys = droi.ys + r
    xs = droi.xs + r
    levels = droi.levels

    starts = padded[ys - dy, xs - dx] != levels
    ys, xs, levels = ys[starts], xs[starts], levels[starts]
    lengths = np.ones(levels.size, dtype=np.int64)
    alive = np.ones(levels.size, dtype=bool)
    while alive.any():
        alive &= padded[ys + dy, xs + dx] == levels
        lengths += alive
        ys = np.where(alive, ys + dy, ys)
        xs = np.where(alive, xs + dx, xs)
    return levels, lengths


def compute_glrlm(droi: DiscretizedRoi, cfg: ExtractionConfig) -> List[TextureMatrix]:
    """Raw run-count matrix per configured direction"""
    matrices = []
    for dx, dy in cfg.directions:
        levels, lengths = runs(droi, dx, dy)
        matrices.append(
            TextureMatrix("GLRLM", count_matrix(levels, lengths, droi.n_levels), (dx, dy))
        )
    return matrices


def glrlm_features(droi: DiscretizedRoi, cfg: ExtractionConfig) -> Dict[str, float]:
    """The 16 GLRLM features, averaged over directions"""
    per_direction = [
        emphasis_statistics(m.matrix, droi.n_pixels) for m in compute_glrlm(droi, cfg)
    ]
    logger.debug("GLRLM over %d directions", len(per_direction))
    return {
        name: float(np.mean([stats[key] for stats in per_direction]))
        for key, name in _NAMES.items()
    }
