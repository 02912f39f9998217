"""
Gray Level Size Zone Matrix (GLSZM) features

Zones are 8-connected components of equal gray level.
"""

from typing import Dict, Tuple

import numpy as np
from scipy import ndimage

from ..imaging.discretize import DiscretizedRoi
from .base import TextureMatrix
from .emphasis import count_matrix, emphasis_statistics

_CONNECTIVITY_8 = np.ones((3, 3), dtype=bool)

_NAMES = {
    "small": "SmallAreaEmphasis",
    "large": "LargeAreaEmphasis",
    "gln": "GrayLevelNonUniformity",
    "glnn": "GrayLevelNonUniformityNormalized",
    "sn": "SizeZoneNonUniformity",
    "snn": "SizeZoneNonUniformityNormalized",
    "percentage": "ZonePercentage",
    "glv": "GrayLevelVariance",
    "sv": "ZoneVariance",
    "entropy": "ZoneEntropy",
    "low": "LowGrayLevelZoneEmphasis",
    "high": "HighGrayLevelZoneEmphasis",
    "small_low": "SmallAreaLowGrayLevelEmphasis",
    "small_high": "SmallAreaHighGrayLevelEmphasis",
    "large_low": "LargeAreaLowGrayLevelEmphasis",
    "large_high": "LargeAreaHighGrayLevelEmphasis",
}


def zones(droi: DiscretizedRoi) -> Tuple[np.ndarray, np.ndarray]:
    """``(levels, areas)`` with one entry per zone, levels ascending"""
    image = droi.level_image()
    zone_levels = []
    zone_areas = []
    for level in np.unique(droi.levels):
        labeled, n_zones = ndimage.label(image == level, structure=_CONNECTIVITY_8)
        areas = np.bincount(labeled.ravel(), minlength=n_zones + 1)[1:]
        zone_levels.append(np.full(n_zones, level, dtype=np.int64))
        zone_areas.append(areas.astype(np.int64))
    return np.concatenate(zone_levels), np.concatenate(zone_areas)


def compute_glszm(droi: DiscretizedRoi) -> TextureMatrix:
    levels, areas = zones(droi)
    return TextureMatrix("GLSZM", count_matrix(levels, areas, droi.n_levels))


def glszm_features(droi: DiscretizedRoi) -> Dict[str, float]:
    """The 16 GLSZM features"""
    stats = emphasis_statistics(compute_glszm(droi).matrix, droi.n_pixels)
    return {name: stats[key] for key, name in _NAMES.items()}
