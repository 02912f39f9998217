"""
Neighbouring Gray Tone Difference Matrix (NGTDM) features

For each ROI pixel with at least one 8-neighbor inside the ROI, the absolute
difference between its level and the mean level of those neighbors is summed
per gray level. Pixels with no ROI neighbor are left out.
"""

import logging
from typing import Dict, Optional

import numpy as np

from ..errors import DegenerateMatrixError
from ..imaging.discretize import DiscretizedRoi
from .base import NEIGHBORS_8, ExtractionConfig, TextureMatrix

logger = logging.getLogger(__name__)


def compute_ngtdm(droi: DiscretizedRoi) -> TextureMatrix:
    """
    Rows ``(n_i, p_i, s_i)`` for gray levels ``1..Ng``

    Raises:
        DegenerateMatrixError: If no ROI pixel has an ROI neighbor
    """
    padded = np.pad(droi.level_image(), 1)
    ys = droi.ys + 1
    xs = droi.xs + 1

    neighbor_sum = np.zeros(droi.n_pixels, dtype=np.float64)
    neighbor_count = np.zeros(droi.n_pixels, dtype=np.int64)
    for dx, dy in NEIGHBORS_8:
        neighbor = padded[ys + dy, xs + dx]
        neighbor_sum += neighbor
        neighbor_count += neighbor > 0

    valid = neighbor_count > 0
    if not valid.any():
        raise DegenerateMatrixError("no ROI pixel has a neighbor inside the ROI")
    skipped = int((~valid).sum())
    if skipped:
        logger.debug("NGTDM skips %d isolated pixels", skipped)

    levels = droi.levels[valid]
    difference = np.abs(levels - neighbor_sum[valid] / neighbor_count[valid])
    n = np.bincount(levels, minlength=droi.n_levels + 1)[1:].astype(np.float64)
    s = np.bincount(levels, weights=difference, minlength=droi.n_levels + 1)[1:]
    p = n / n.sum()
    return TextureMatrix("NGTDM", np.column_stack([n, p, s]))


def ngtdm_features(droi: DiscretizedRoi, cfg: Optional[ExtractionConfig] = None) -> Dict[str, float]:
    """
    The 5 NGTDM features

    Conventions: Coarseness is ``cfg.coarseness_cap`` when ``sum p_i s_i = 0``;
    Contrast is 0 with fewer than two gray levels present; Busyness and
    Strength are 0 when their denominators vanish.
    """
    cfg = cfg or ExtractionConfig()
    table = compute_ngtdm(droi).matrix
    present = table[:, 0] > 0
    n_valid = float(table[:, 0].sum())
    p = table[present, 1]
    s = table[present, 2]
    i = np.arange(1, table.shape[0] + 1, dtype=np.float64)[present]
    ngp = int(present.sum())

    ps = float(np.sum(p * s))
    s_total = float(np.sum(s))
    level_diff = i[:, None] - i[None, :]

    coarseness = cfg.coarseness_cap if ps == 0.0 else 1.0 / ps

    if ngp <= 1:
        contrast = 0.0
    else:
        contrast = float(
            np.sum(np.outer(p, p) * level_diff ** 2) / (ngp * (ngp - 1)) * s_total / n_valid
        )

    weighted = i * p
    busy_denominator = float(np.sum(np.abs(weighted[:, None] - weighted[None, :])))
    busyness = ps / busy_denominator if busy_denominator != 0.0 else 0.0

    pair_p = p[:, None] + p[None, :]
    pair_ps = (p * s)[:, None] + (p * s)[None, :]
    complexity = float(np.sum(np.abs(level_diff) * pair_ps / pair_p) / n_valid)

    strength = (
        float(np.sum(pair_p * level_diff ** 2) / s_total) if s_total != 0.0 else 0.0
    )

    return {
        "Coarseness": float(coarseness),
        "Contrast": contrast,
        "Busyness": float(busyness),
        "Complexity": complexity,
        "Strength": strength,
    }
