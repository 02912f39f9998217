"""
First-order (histogram) features

Intensity statistics use the raw ROI values; Entropy and Uniformity use the
fixed-bin-width histogram. Kurtosis is the Pearson (non-excess) form and
percentiles interpolate linearly between order statistics.
"""

from typing import Dict

import numpy as np

from ..errors import UndefinedStatisticError
from ..imaging.discretize import discretize_roi
from ..imaging.grid import BinaryMask, ImageGrid
from .base import EPS


def first_order_features(img: ImageGrid, mask: BinaryMask, bin_width: float = 0.3) -> Dict[str, float]:
    """
    The 18 first-order features of the ROI

    Raises:
        EmptyRoiError: If the mask is empty
        UndefinedStatisticError: If the ROI has zero variance (Skewness/Kurtosis)
    """
    droi = discretize_roi(img, mask, bin_width)
    x = droi.values
    n = x.size

    mean = float(x.mean())
    deviation = x - mean
    m2 = float(np.mean(deviation ** 2))
    if m2 == 0.0:
        raise UndefinedStatisticError("Skewness/Kurtosis undefined for a zero-variance ROI")
    m3 = float(np.mean(deviation ** 3))
    m4 = float(np.mean(deviation ** 4))

    p10, p25, median, p75, p90 = (float(v) for v in np.percentile(x, [10, 25, 50, 75, 90]))
    robust = x[(x >= p10) & (x <= p90)]

    energy = float(np.sum(x ** 2))
    pixel_area = img.spacing[0] * img.spacing[1]

    histogram = np.bincount(droi.levels)[1:] / n
    histogram = histogram[histogram > 0]

    return {
        "Energy": energy,
        "TotalEnergy": pixel_area * energy,
        "Entropy": float(-np.sum(histogram * np.log2(histogram + EPS))),
        "Minimum": float(x.min()),
        "10Percentile": p10,
        "90Percentile": p90,
        "Maximum": float(x.max()),
        "Mean": mean,
        "Median": median,
        "InterquartileRange": p75 - p25,
        "Range": float(x.max() - x.min()),
        "MeanAbsoluteDeviation": float(np.mean(np.abs(deviation))),
        "RobustMeanAbsoluteDeviation": float(np.mean(np.abs(robust - robust.mean()))),
        "RootMeanSquared": float(np.sqrt(energy / n)),
        "Skewness": m3 / m2 ** 1.5,
        "Kurtosis": m4 / m2 ** 2,
        "Variance": m2,
        "Uniformity": float(np.sum(histogram ** 2)),
    }
