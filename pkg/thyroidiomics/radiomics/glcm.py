"""
Gray Level Co-occurrence Matrix (GLCM) features

One symmetric co-occurrence matrix is built per direction (pairs counted in
both orders, pairs leaving the ROI skipped) and normalized to sum 1. Features
are computed per direction and averaged over the directions that have pairs.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np

from ..errors import DegenerateMatrixError
from ..imaging.discretize import DiscretizedRoi
from .base import EPS, ExtractionConfig, TextureMatrix

logger = logging.getLogger(__name__)


def shifted_pairs(levels: np.ndarray, dx: int, dy: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Level pairs ``(L[y, x], L[y + dy, x + dx])`` with both pixels inside the ROI

    Args:
        levels: Level image, 0 outside the ROI

    Returns:
        Two flat arrays of equal length
    """
    height, width = levels.shape
    y0, y1 = max(0, -dy), height - max(0, dy)
    x0, x1 = max(0, -dx), width - max(0, dx)
    if y1 <= y0 or x1 <= x0:
        empty = np.zeros(0, dtype=levels.dtype)
        return empty, empty
    a = levels[y0:y1, x0:x1]
    b = levels[y0 + dy : y1 + dy, x0 + dx : x1 + dx]
    keep = (a > 0) & (b > 0)
    return a[keep], b[keep]


def compute_glcm(droi: DiscretizedRoi, cfg: ExtractionConfig) -> List[TextureMatrix]:
    """
    Normalized symmetric co-occurrence matrices, one per direction with pairs

    Raises:
        DegenerateMatrixError: If no direction yields a single pair
    """
    levels = droi.level_image()
    ng = droi.n_levels
    matrices = []
    for dx, dy in cfg.directions:
        a, b = shifted_pairs(levels, dx * cfg.glcm_distance, dy * cfg.glcm_distance)
        if a.size == 0:
            logger.debug("GLCM direction (%d, %d) has no in-ROI pair", dx, dy)
            continue
        counts = np.zeros((ng, ng), dtype=np.float64)
        np.add.at(counts, (a - 1, b - 1), 1.0)
        counts += counts.T
        matrices.append(TextureMatrix("GLCM", counts / counts.sum(), (dx, dy)))

    if not matrices:
        raise DegenerateMatrixError("ROI has no valid pixel pair in any GLCM direction")
    return matrices


def _mcc(p: np.ndarray, px: np.ndarray, py: np.ndarray) -> float:
    # Q = D^-1 P D^-1 P^T is similar to S^2 with S = D^-1/2 P D^-1/2 (P symmetric)
    present = (px > 0) & (py > 0)
    if present.sum() < 2:
        return 1.0
    sub = p[np.ix_(present, present)]
    s = sub / np.sqrt(np.outer(px[present], py[present]))
    eigenvalues = np.sort(np.linalg.eigvalsh((s + s.T) / 2.0) ** 2)[::-1]
    return float(np.sqrt(max(eigenvalues[1], 0.0)))


def _single_glcm_features(p: np.ndarray) -> Dict[str, float]:
    ng = p.shape[0]
    grid = np.arange(1, ng + 1, dtype=np.float64)
    i = grid[:, None]
    j = grid[None, :]

    px = p.sum(axis=1)
    py = p.sum(axis=0)
    ux = float(np.sum(grid * px))
    uy = float(np.sum(grid * py))
    sigx = float(np.sqrt(np.sum(px * (grid - ux) ** 2)))
    sigy = float(np.sqrt(np.sum(py * (grid - uy) ** 2)))

    ij_sum = (i + j).astype(np.int64).ravel()
    ij_diff = np.abs(i - j).astype(np.int64).ravel()
    p_sum = np.bincount(ij_sum, weights=p.ravel(), minlength=2 * ng + 1)[2:]
    p_diff = np.bincount(ij_diff, weights=p.ravel(), minlength=ng)[:ng]
    k_sum = np.arange(2, 2 * ng + 1, dtype=np.float64)
    k_diff = np.arange(0, ng, dtype=np.float64)

    hx = float(-np.sum(px * np.log2(px + EPS)))
    hy = float(-np.sum(py * np.log2(py + EPS)))
    hxy = float(-np.sum(p * np.log2(p + EPS)))
    pxpy = np.outer(px, py)
    hxy1 = float(-np.sum(p * np.log2(pxpy + EPS)))
    hxy2 = float(-np.sum(pxpy * np.log2(pxpy + EPS)))

    cluster = i + j - ux - uy
    difference_average = float(np.sum(k_diff * p_diff))

    if sigx == 0.0 or sigy == 0.0:
        correlation = 1.0
    else:
        correlation = float((np.sum(p * i * j) - ux * uy) / (sigx * sigy))

    h_max = max(hx, hy)
    imc1 = (hxy - hxy1) / h_max if h_max != 0.0 else 0.0
    imc2 = 0.0 if hxy > hxy2 else float(np.sqrt(1.0 - np.exp(-2.0 * (hxy2 - hxy))))

    return {
        "Autocorrelation": float(np.sum(p * i * j)),
        "JointAverage": ux,
        "ClusterProminence": float(np.sum(p * cluster ** 4)),
        "ClusterShade": float(np.sum(p * cluster ** 3)),
        "ClusterTendency": float(np.sum(p * cluster ** 2)),
        "Contrast": float(np.sum(p * (i - j) ** 2)),
        "Correlation": correlation,
        "DifferenceAverage": difference_average,
        "DifferenceEntropy": float(-np.sum(p_diff * np.log2(p_diff + EPS))),
        "DifferenceVariance": float(np.sum(p_diff * (k_diff - difference_average) ** 2)),
        "JointEnergy": float(np.sum(p ** 2)),
        "JointEntropy": hxy,
        "Imc1": float(imc1),
        "Imc2": imc2,
        "Idm": float(np.sum(p_diff / (1.0 + k_diff ** 2))),
        "MCC": _mcc(p, px, py),
        "Idmn": float(np.sum(p_diff / (1.0 + k_diff ** 2 / ng ** 2))),
        "Id": float(np.sum(p_diff / (1.0 + k_diff))),
        "Idn": float(np.sum(p_diff / (1.0 + k_diff / ng))),
        "InverseVariance": float(np.sum(p_diff[1:] / k_diff[1:] ** 2)),
        "MaximumProbability": float(p.max()),
        "SumAverage": float(np.sum(k_sum * p_sum)),
        "SumEntropy": float(-np.sum(p_sum * np.log2(p_sum + EPS))),
        "SumSquares": float(np.sum(p * (i - ux) ** 2)),
    }


def glcm_features(matrices: List[TextureMatrix]) -> Dict[str, float]:
    """
    The 24 GLCM features, averaged over directions in the given order

    Raises:
        DegenerateMatrixError: If ``matrices`` is empty
    """
    if not matrices:
        raise DegenerateMatrixError("no GLCM to compute features from")
    per_direction = [_single_glcm_features(m.matrix) for m in matrices]
    names = per_direction[0].keys()
    return {name: float(np.mean([f[name] for f in per_direction])) for name in names}
