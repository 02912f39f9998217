"""
Fixed-bin-width gray-level discretization of an ROI

Levels are anchored at the ROI minimum: ``level = floor((x - min_roi) / w) + 1``.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import EmptyRoiError, InvalidRangeError
from .grid import BinaryMask, ImageGrid, check_geometry


@dataclass(frozen=True, eq=False)
class DiscretizedRoi:
    """
    Gray levels of every ROI pixel

    Attributes:
        xs, ys: Pixel coordinates of the ROI entries (row-major scan order)
        levels: Gray level per entry, ``1 <= level <= n_levels``
        n_levels: ``Ng``, the largest level present
        bin_width: Bin width used
        shape: ``(height, width)`` of the source grid
        values: Original intensities per entry
    """

    xs: np.ndarray
    ys: np.ndarray
    levels: np.ndarray
    n_levels: int
    bin_width: float
    shape: Tuple[int, int]
    values: np.ndarray

    @property
    def n_pixels(self) -> int:
        return int(self.levels.size)

    def level_image(self) -> np.ndarray:
        """``(height, width)`` int array with levels inside the ROI and 0 outside"""
        image = np.zeros(self.shape, dtype=np.int64)
        image[self.ys, self.xs] = self.levels
        return image


def discretize_roi(img: ImageGrid, mask: BinaryMask, bin_width: float) -> DiscretizedRoi:
    """
    Bin the ROI intensities with a fixed bin width

    Raises:
        InvalidRangeError: If ``bin_width <= 0``
        EmptyRoiError: If the mask has no positive pixel
        GeometryMismatchError: If image and mask disagree
    """
    if not bin_width > 0:
        raise InvalidRangeError(f"bin width must be positive, got {bin_width}")
    check_geometry(img, mask)

    ys, xs = np.nonzero(mask.values)
    if ys.size == 0:
        raise EmptyRoiError("mask has no foreground pixel")

    values = img.pixels[ys, xs]
    levels = np.floor((values - values.min()) / bin_width).astype(np.int64) + 1
    return DiscretizedRoi(
        xs=xs.astype(np.int64),
        ys=ys.astype(np.int64),
        levels=levels,
        n_levels=int(levels.max()),
        bin_width=float(bin_width),
        shape=(img.height, img.width),
        values=values,
    )
