"""
Segmentation-side evaluation

Dice loss with a false-positive penalty, the Dice similarity coefficient,
sliding-window application of a pixel scorer, thresholding and ROI count totals.
"""

import logging
from typing import Callable, List, Tuple

import numpy as np

from ..errors import ContractError, InvalidRangeError
from ..imaging.grid import BinaryMask, ImageGrid, ProbabilityMap, check_geometry

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 2.0
DEFAULT_EPS = 1e-5
DEFAULT_WINDOW = 128

Scorer = Callable[[np.ndarray], np.ndarray]


def dice_fp_loss(
    pred: ProbabilityMap,
    gt: BinaryMask,
    alpha: float = DEFAULT_ALPHA,
    eps: float = DEFAULT_EPS,
) -> float:
    """
    Dice loss plus an ``alpha``-weighted false-positive term

    ``1 - (2 sum(p g) + eps) / (sum p + sum g + eps) + alpha * sum(p (1 - g)) / (sum p + sum g + eps)``
    """
    check_geometry(pred, gt)
    if not eps > 0:
        raise InvalidRangeError(f"eps must be positive, got {eps}")
    if alpha < 0:
        raise InvalidRangeError(f"alpha must be >= 0, got {alpha}")

    p = pred.pixels
    g = gt.values.astype(np.float64)
    sum_p = float(p.sum())
    sum_g = float(g.sum())
    denominator = sum_p + sum_g + eps
    overlap = float((p * g).sum())
    false_positive = float((p * (1.0 - g)).sum())
    return 1.0 - (2.0 * overlap + eps) / denominator + alpha * false_positive / denominator


def dsc(a: BinaryMask, b: BinaryMask) -> float:
    """Dice similarity coefficient; two empty masks score 1.0"""
    check_geometry(a, b)
    size_a = a.count
    size_b = b.count
    if size_a + size_b == 0:
        return 1.0
    overlap = int(np.logical_and(a.as_bool(), b.as_bool()).sum())
    return 2.0 * overlap / (size_a + size_b)


def _tile_starts(size: int, window: int) -> List[int]:
    """Window origins along one axis: stride ``window // 2``, last tile clamped inward"""
    if window >= size:
        return [0]
    stride = max(1, window // 2)
    starts = list(range(0, size - window, stride))
    starts.append(size - window)
    return starts


def tile_grid(height: int, width: int, window: int) -> List[Tuple[int, int, int, int]]:
    """``(row, col, tile_height, tile_width)`` of every tile, in row-major order"""
    tile_h = min(window, height)
    tile_w = min(window, width)
    return [
        (r, c, tile_h, tile_w)
        for r in _tile_starts(height, window)
        for c in _tile_starts(width, window)
    ]


def sliding_window_apply(img: ImageGrid, window: int, scorer: Scorer) -> ProbabilityMap:
    """
    Apply ``scorer`` over half-overlapping tiles and average the overlaps

    A window larger than the image along an axis shrinks to the image size, so a
    big enough window scores the whole image once. Tiles are accumulated in a
    fixed row-major order.

    Raises:
        InvalidRangeError: If ``window <= 0``
        ContractError: If the scorer returns a differently shaped tile
    """
    if window <= 0:
        raise InvalidRangeError(f"window must be positive, got {window}")

    total = np.zeros((img.height, img.width), dtype=np.float64)
    weight = np.zeros((img.height, img.width), dtype=np.float64)
    tiles = tile_grid(img.height, img.width, window)
    logger.debug("Scoring %d tiles of window %d", len(tiles), window)

    for r, c, h, w in tiles:
        tile = img.pixels[r : r + h, c : c + w]
        scored = np.asarray(scorer(tile.copy()), dtype=np.float64)
        if scored.shape != tile.shape:
            raise ContractError(f"scorer returned shape {scored.shape} for a {tile.shape} tile")
        if scored.size and (scored.min() < 0.0 or scored.max() > 1.0):
            raise ContractError("scorer returned values outside [0, 1]")
        total[r : r + h, c : c + w] += scored
        weight[r : r + h, c : c + w] += 1.0

    return ProbabilityMap(np.clip(total / weight, 0.0, 1.0), img.spacing)


def binarize(p: ProbabilityMap, threshold: float = 0.5) -> BinaryMask:
    """Foreground where ``p >= threshold``"""
    if not 0.0 <= threshold <= 1.0:
        raise InvalidRangeError(f"threshold must lie in [0, 1], got {threshold}")
    return BinaryMask((p.pixels >= threshold).astype(np.uint8), p.spacing)


def roi_counts(img: ImageGrid, mask: BinaryMask) -> float:
    """Total raw counts inside the mask"""
    check_geometry(img, mask)
    return float(img.pixels[mask.as_bool()].sum())
