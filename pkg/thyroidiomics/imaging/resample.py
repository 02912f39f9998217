"""
Spatial resampling of image grids

Pixel ``(i, j)`` covers the physical point ``((i + 0.5) * sx, (j + 0.5) * sy)``.
Output pixels are mapped back to continuous source indices with that
convention and interpolated there; indices that fall outside the source are
clamped to the nearest edge pixel for every method.

``cubic`` is the Keys cubic-convolution kernel with ``a = -0.5``. It is
interpolating and local, and stands in for B-spline resampling.
"""

from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import InvalidArgumentError, InvalidRangeError
from .grid import BinaryMask, Grid, ImageGrid

KEYS_A = -0.5


class Interpolator(Enum):
    """Interpolation methods"""

    NEAREST = "nearest"
    BILINEAR = "bilinear"
    CUBIC = "cubic"

    @classmethod
    def parse(cls, method: Union[str, "Interpolator"]) -> "Interpolator":
        if isinstance(method, cls):
            return method
        try:
            return cls(str(method).lower())
        except ValueError as e:
            choices = ", ".join(m.value for m in cls)
            raise InvalidArgumentError(f"unknown interpolator '{method}' (choose {choices})") from e


def keys_kernel(t: np.ndarray, a: float = KEYS_A) -> np.ndarray:
    """Keys cubic convolution weights for tap distances ``t``"""
    t = np.abs(np.asarray(t, dtype=np.float64))
    t2 = t * t
    t3 = t2 * t
    near = (a + 2.0) * t3 - (a + 3.0) * t2 + 1.0
    far = a * t3 - 5.0 * a * t2 + 8.0 * a * t - 4.0 * a
    return np.where(t <= 1.0, near, np.where(t < 2.0, far, 0.0))


def _taps(coords: np.ndarray, size: int, method: Interpolator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Source indices and weights along one axis

    Args:
        coords: Continuous source indices, any shape ``S``
        size: Source length along the axis
        method: Interpolator

    Returns:
        ``(indices, weights)``, both of shape ``S + (taps,)``; indices are clamped
    """
    coords = np.asarray(coords, dtype=np.float64)
    if method is Interpolator.NEAREST:
        idx = np.floor(coords + 0.5)[..., None]
        weights = np.ones_like(idx)
    else:
        base = np.floor(coords)
        frac = coords - base
        if method is Interpolator.BILINEAR:
            idx = np.stack([base, base + 1.0], axis=-1)
            weights = np.stack([1.0 - frac, frac], axis=-1)
        else:
            offsets = np.array([-1.0, 0.0, 1.0, 2.0])
            idx = base[..., None] + offsets
            weights = keys_kernel(frac[..., None] - offsets)
    idx = np.clip(idx, 0, size - 1).astype(np.intp)
    return idx, weights


def _sample_separable(
    pixels: np.ndarray, u: np.ndarray, v: np.ndarray, method: Interpolator
) -> np.ndarray:
    """Interpolate on the tensor grid ``v x u`` (1D coordinate vectors)"""
    ix, wx = _taps(u, pixels.shape[1], method)
    iy, wy = _taps(v, pixels.shape[0], method)
    # rows first: (H, W', taps) -> (H, W')
    rows = np.einsum("hwk,wk->hw", pixels[:, ix], wx)
    # then columns: (H', taps, W') -> (H', W')
    return np.einsum("hkw,hk->hw", rows[iy], wy)


def sample_points(pixels: np.ndarray, u: np.ndarray, v: np.ndarray, method: Interpolator) -> np.ndarray:
    """
    Interpolate ``pixels`` at arbitrary continuous indices

    Args:
        pixels: ``(height, width)`` source array
        u: Column (x) coordinates
        v: Row (y) coordinates, same shape as ``u``

    Returns:
        Interpolated values with the shape of ``u``
    """
    ix, wx = _taps(u, pixels.shape[1], method)
    iy, wy = _taps(v, pixels.shape[0], method)
    gathered = pixels[iy[..., :, None], ix[..., None, :]]
    return np.einsum("...ab,...a,...b->...", gathered, wy, wx)


def _output_geometry(
    grid: Grid,
    target_spacing: Optional[Tuple[float, float]],
    target_size: Optional[Tuple[int, int]],
) -> Tuple[Tuple[int, int], Tuple[float, float]]:
    if (target_spacing is None) == (target_size is None):
        raise InvalidArgumentError("give exactly one of target_spacing or target_size")

    sx, sy = grid.spacing
    if target_spacing is not None:
        tsx, tsy = (float(s) for s in target_spacing)
        if not (tsx > 0 and tsy > 0):
            raise InvalidRangeError(f"target spacing must be positive, got {target_spacing}")
        width = max(1, int(round(grid.width * sx / tsx)))
        height = max(1, int(round(grid.height * sy / tsy)))
        return (width, height), (tsx, tsy)

    width, height = (int(n) for n in target_size)  # type: ignore[union-attr]
    if width <= 0 or height <= 0:
        raise InvalidRangeError(f"target size must be positive, got {target_size}")
    return (width, height), (grid.width * sx / width, grid.height * sy / height)


def resample(
    grid: Grid,
    target_spacing: Optional[Tuple[float, float]] = None,
    target_size: Optional[Tuple[int, int]] = None,
    method: Union[str, Interpolator] = Interpolator.NEAREST,
) -> Grid:
    """
    Resample an image or mask onto a new pixel lattice

    A target spacing is honored exactly (the extent is rounded to whole pixels);
    a target size keeps the physical extent and derives the spacing from it.
    Masks accept only nearest-neighbor interpolation.

    Args:
        grid: ImageGrid or BinaryMask
        target_spacing: Output spacing ``(sx, sy)`` in mm
        target_size: Output size ``(width, height)`` in pixels
        method: ``nearest``, ``bilinear`` or ``cubic``

    Returns:
        A grid of the same kind

    Raises:
        InvalidRangeError: On a non-positive target
        InvalidArgumentError: On a non-nearest method for a mask
    """
    method = Interpolator.parse(method)
    (width, height), (tsx, tsy) = _output_geometry(grid, target_spacing, target_size)
    sx, sy = grid.spacing

    u = (np.arange(width) + 0.5) * tsx / sx - 0.5
    v = (np.arange(height) + 0.5) * tsy / sy - 0.5

    if isinstance(grid, BinaryMask):
        if method is not Interpolator.NEAREST:
            raise InvalidArgumentError("masks can only be resampled with nearest neighbor")
        values = _sample_separable(grid.values.astype(np.float64), u, v, method)
        return BinaryMask(values.astype(np.uint8), (tsx, tsy))

    return ImageGrid(_sample_separable(grid.pixels, u, v, method), (tsx, tsy))


def affine_sample(
    grid: Grid,
    matrix: np.ndarray,
    offset: np.ndarray,
    method: Union[str, Interpolator],
) -> Grid:
    """
    Pull-back resampling through an affine map in index space

    Output pixel ``(x, y)`` takes the source value at ``matrix @ (x, y) + offset``.

    Args:
        grid: ImageGrid or BinaryMask (masks: nearest only)
        matrix: 2x2 array acting on ``(x, y)`` column vectors
        offset: Length-2 translation

    Returns:
        A grid of the same kind and geometry
    """
    method = Interpolator.parse(method)
    ys, xs = np.mgrid[0 : grid.height, 0 : grid.width].astype(np.float64)
    m = np.asarray(matrix, dtype=np.float64)
    b = np.asarray(offset, dtype=np.float64)
    u = m[0, 0] * xs + m[0, 1] * ys + b[0]
    v = m[1, 0] * xs + m[1, 1] * ys + b[1]

    if isinstance(grid, BinaryMask):
        if method is not Interpolator.NEAREST:
            raise InvalidArgumentError("masks can only be resampled with nearest neighbor")
        values = sample_points(grid.values.astype(np.float64), u, v, method)
        return BinaryMask(values.astype(np.uint8), grid.spacing)

    return ImageGrid(sample_points(grid.pixels, u, v, method), grid.spacing)
