"""
Image and mask grids, I/O, intensity transforms, resampling and augmentation
"""

from .grid import (
    BinaryMask,
    ImageGrid,
    ProbabilityMap,
    check_geometry,
    clip_intensities,
    minmax_normalize,
    zscore_normalize,
)
from .discretize import DiscretizedRoi, discretize_roi
from .resample import Interpolator, resample

__all__ = [
    "BinaryMask",
    "DiscretizedRoi",
    "ImageGrid",
    "Interpolator",
    "ProbabilityMap",
    "check_geometry",
    "clip_intensities",
    "discretize_roi",
    "minmax_normalize",
    "resample",
    "zscore_normalize",
]
