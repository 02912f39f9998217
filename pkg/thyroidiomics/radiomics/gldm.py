"""
Gray Level Dependence Matrix (GLDM) features

A pixel's dependence is 1 plus the number of its 8 neighbors inside the ROI
whose level differs by at most ``gldm_alpha``.
"""

from typing import Dict

import numpy as np

from ..imaging.discretize import DiscretizedRoi
from .base import NEIGHBORS_8, ExtractionConfig, TextureMatrix
from .emphasis import count_matrix, emphasis_statistics

_NAMES = {
    "small": "SmallDependenceEmphasis",
    "large": "LargeDependenceEmphasis",
    "gln": "GrayLevelNonUniformity",
    "sn": "DependenceNonUniformity",
    "snn": "DependenceNonUniformityNormalized",
    "glv": "GrayLevelVariance",
    "sv": "DependenceVariance",
    "entropy": "DependenceEntropy",
    "low": "LowGrayLevelEmphasis",
    "high": "HighGrayLevelEmphasis",
    "small_low": "SmallDependenceLowGrayLevelEmphasis",
    "small_high": "SmallDependenceHighGrayLevelEmphasis",
    "large_low": "LargeDependenceLowGrayLevelEmphasis",
    "large_high": "LargeDependenceHighGrayLevelEmphasis",
}


def dependence_sizes(droi: DiscretizedRoi, alpha: float = 0.0) -> np.ndarray:
    """Dependence size of every ROI pixel, in ``droi`` entry order"""
    padded = np.pad(droi.level_image(), 1)
    ys = droi.ys + 1
    xs = droi.xs + 1
    center = droi.levels
    sizes = np.ones(droi.n_pixels, dtype=np.int64)
    for dx, dy in NEIGHBORS_8:
        neighbor = padded[ys + dy, xs + dx]
        sizes += (neighbor > 0) & (np.abs(neighbor - center) <= alpha)
    return sizes


def compute_gldm(droi: DiscretizedRoi, cfg: ExtractionConfig) -> TextureMatrix:
    sizes = dependence_sizes(droi, cfg.gldm_alpha)
    return TextureMatrix("GLDM", count_matrix(droi.levels, sizes, droi.n_levels))


def gldm_features(droi: DiscretizedRoi, cfg: ExtractionConfig) -> Dict[str, float]:
    """The 14 GLDM features"""
    stats = emphasis_statistics(compute_gldm(droi, cfg).matrix, droi.n_pixels)
    return {name: stats[key] for key, name in _NAMES.items()}
