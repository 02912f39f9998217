"""
Image and mask grids

An ``ImageGrid`` is a 2D field of finite counts with a physical pixel spacing;
a ``BinaryMask`` marks ROI membership on the same geometry. Arrays are stored
as ``(height, width)`` numpy arrays in row-major order and are read-only, so
every transform returns a new grid.
"""

from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import numpy as np

from ..errors import DegenerateRangeError, GeometryMismatchError, InvalidRangeError

Spacing = Tuple[float, float]


class Geometry(NamedTuple):
    width: int
    height: int
    spacing: Spacing


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _check_spacing(spacing: Spacing) -> Spacing:
    sx, sy = (float(s) for s in spacing)
    if not (sx > 0 and sy > 0) or not np.isfinite([sx, sy]).all():
        raise InvalidRangeError(f"pixel spacing must be positive, got {spacing}")
    return sx, sy


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """2D scalar pixel field (counts) with physical spacing in mm per pixel"""

    pixels: np.ndarray
    spacing: Spacing = (1.0, 1.0)

    def __post_init__(self) -> None:
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.ndim != 2 or pixels.size == 0:
            raise InvalidRangeError(f"image must be a non-empty 2D array, got shape {pixels.shape}")
        if not np.isfinite(pixels).all():
            raise InvalidRangeError("image contains non-finite values")
        object.__setattr__(self, "pixels", _frozen(pixels))
        object.__setattr__(self, "spacing", _check_spacing(self.spacing))

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.width, self.height, self.spacing)

    def with_pixels(self, pixels: np.ndarray) -> "ImageGrid":
        """Same geometry, new values"""
        return ImageGrid(pixels, self.spacing)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Per-pixel ROI membership, values in {0, 1}"""

    values: np.ndarray
    spacing: Spacing = (1.0, 1.0)

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.ndim != 2 or values.size == 0:
            raise InvalidRangeError(f"mask must be a non-empty 2D array, got shape {values.shape}")
        if values.dtype == np.bool_:
            values = values.astype(np.uint8)
        elif not np.isin(values, (0, 1)).all():
            raise InvalidRangeError("mask values must be 0 or 1")
        object.__setattr__(self, "values", _frozen(values.astype(np.uint8)))
        object.__setattr__(self, "spacing", _check_spacing(self.spacing))

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.width, self.height, self.spacing)

    @property
    def count(self) -> int:
        """Number of mask-positive pixels"""
        return int(self.values.sum())

    def as_bool(self) -> np.ndarray:
        return self.values.astype(bool)


@dataclass(frozen=True, eq=False)
class ProbabilityMap(ImageGrid):
    """Predicted foreground probability per pixel"""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.pixels.min() < 0.0 or self.pixels.max() > 1.0:
            raise InvalidRangeError("probabilities must lie in [0, 1]")


Grid = Union[ImageGrid, BinaryMask]


def check_geometry(a: Grid, b: Grid) -> None:
    """Raise ``GeometryMismatchError`` unless both grids share size and spacing"""
    if (a.width, a.height) != (b.width, b.height) or not np.allclose(a.spacing, b.spacing):
        raise GeometryMismatchError(
            f"{a.width}x{a.height} @ {a.spacing} vs {b.width}x{b.height} @ {b.spacing}"
        )


def clip_intensities(img: ImageGrid, lo: float, hi: float) -> ImageGrid:
    """
    Clamp every pixel into ``[lo, hi]``

    Raises:
        InvalidRangeError: If ``lo >= hi``
    """
    if not lo < hi:
        raise InvalidRangeError(f"clip bounds must satisfy lo < hi, got ({lo}, {hi})")
    return img.with_pixels(np.clip(img.pixels, lo, hi))


def minmax_normalize(img: ImageGrid) -> ImageGrid:
    """
    Affinely map the image range onto [0, 1]

    Raises:
        DegenerateRangeError: If the image is constant
    """
    lo = float(img.pixels.min())
    hi = float(img.pixels.max())
    if hi <= lo:
        raise DegenerateRangeError("cannot min-max normalize a constant image")
    return img.with_pixels((img.pixels - lo) / (hi - lo))


def zscore_normalize(img: ImageGrid) -> ImageGrid:
    """
    Standardize to mean 0 and population standard deviation 1

    Raises:
        DegenerateRangeError: If the image has zero variance
    """
    mean = float(img.pixels.mean())
    centered = img.pixels - mean
    sd = float(np.sqrt(np.mean(centered * centered)))
    if sd == 0.0:
        raise DegenerateRangeError("cannot z-score an image with zero variance")
    return img.with_pixels(centered / sd)
