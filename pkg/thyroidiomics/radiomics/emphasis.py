"""
Statistics shared by the count-matrix families

GLRLM, GLSZM and GLDM all hold a ``(gray level) x (size)`` count matrix where
"size" is a run length, a zone area or a dependence count. Their features are
the same formulas under different names.
"""

from typing import Dict

import numpy as np

from ..errors import DegenerateMatrixError
from .base import EPS


def emphasis_statistics(counts: np.ndarray, n_pixels: int) -> Dict[str, float]:
    """
    Generic size-emphasis statistics of a count matrix

    Args:
        counts: ``Ng x S`` matrix; row ``i - 1`` is gray level ``i``, column ``j - 1`` is size ``j``
        n_pixels: ROI pixel count (denominator of the percentage)

    Returns:
        Dict keyed by generic statistic name (``small``, ``large``, ``gln`` ...)
    """
    total = float(counts.sum())
    if total <= 0:
        raise DegenerateMatrixError("count matrix is empty")

    ng, ns = counts.shape
    i = np.arange(1, ng + 1, dtype=np.float64)[:, None]
    j = np.arange(1, ns + 1, dtype=np.float64)[None, :]
    p = counts / total

    per_level = counts.sum(axis=1)
    per_size = counts.sum(axis=0)
    mu_i = float(np.sum(p * i))
    mu_j = float(np.sum(p * j))

    return {
        "small": float(np.sum(p / j ** 2)),
        "large": float(np.sum(p * j ** 2)),
        "gln": float(np.sum(per_level ** 2) / total),
        "glnn": float(np.sum(per_level ** 2) / total ** 2),
        "sn": float(np.sum(per_size ** 2) / total),
        "snn": float(np.sum(per_size ** 2) / total ** 2),
        "percentage": total / float(n_pixels),
        "glv": float(np.sum(p * (i - mu_i) ** 2)),
        "sv": float(np.sum(p * (j - mu_j) ** 2)),
        "entropy": float(-np.sum(p * np.log2(p + EPS))),
        "low": float(np.sum(p / i ** 2)),
        "high": float(np.sum(p * i ** 2)),
        "small_low": float(np.sum(p / (i ** 2 * j ** 2))),
        "small_high": float(np.sum(p * i ** 2 / j ** 2)),
        "large_low": float(np.sum(p * j ** 2 / i ** 2)),
        "large_high": float(np.sum(p * i ** 2 * j ** 2)),
    }


def count_matrix(levels: np.ndarray, sizes: np.ndarray, n_levels: int) -> np.ndarray:
    """``n_levels x max(sizes)`` integer histogram of (level, size) observations"""
    counts = np.zeros((n_levels, int(sizes.max())), dtype=np.int64)
    np.add.at(counts, (levels - 1, sizes - 1), 1)
    return counts
