"""
Paired equivalence testing (two one-sided t-tests)
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..errors import InvalidArgumentError, InvalidRangeError
from .metrics import CATEGORIES, CLASS_METRICS, MetricsReport

logger = logging.getLogger(__name__)

DEFAULT_MARGIN = 0.05
DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class TostResult:
    """Outcome of a paired TOST; ``equivalent`` when ``p_tost < alpha``"""

    n: int
    mean_diff: float
    sd_diff: float
    margin: float
    alpha: float
    p_lower: float
    p_upper: float
    p_tost: float
    equivalent: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def tost_paired(
    a: Sequence[float],
    b: Sequence[float],
    margin: float = DEFAULT_MARGIN,
    alpha: float = DEFAULT_ALPHA,
) -> TostResult:
    """
    Test whether paired values ``a`` and ``b`` are equivalent within ``±margin``

    With ``d = a - b`` the lower test rejects ``mean(d) <= -margin`` and the
    upper test rejects ``mean(d) >= margin``, both on ``n - 1`` degrees of
    freedom. When all differences are equal the t statistics are undefined and
    ``p_tost`` is 0 if ``|mean(d)| < margin``, else 1.

    Raises:
        InvalidArgumentError: If fewer than two pairs or the lengths differ
        InvalidRangeError: If ``margin <= 0`` or ``alpha`` is outside (0, 1)
    """
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    if a_arr.shape != b_arr.shape or a_arr.ndim != 1:
        raise InvalidArgumentError("paired inputs must be 1D and of equal length")
    n = int(a_arr.size)
    if n < 2:
        raise InvalidArgumentError(f"TOST needs at least two pairs, got {n}")
    if not margin > 0:
        raise InvalidRangeError(f"margin must be positive, got {margin}")
    if not 0.0 < alpha < 1.0:
        raise InvalidRangeError(f"alpha must lie in (0, 1), got {alpha}")

    d = a_arr - b_arr
    mean = float(d.mean())
    sd = float(d.std(ddof=1))

    if sd == 0.0:
        p = 0.0 if abs(mean) < margin else 1.0
        p_lower = p_upper = p
    else:
        se = sd / np.sqrt(n)
        df = n - 1
        p_lower = float(stats.t.sf((mean + margin) / se, df))
        p_upper = float(stats.t.cdf((mean - margin) / se, df))

    p_tost = max(p_lower, p_upper)
    return TostResult(n, mean, sd, float(margin), float(alpha), p_lower, p_upper, p_tost, p_tost < alpha)


def paired_metric_series(
    a_reports: Sequence[MetricsReport],
    b_reports: Sequence[MetricsReport],
    metric: str,
    category: str,
) -> List[Tuple[Optional[int], float, float]]:
    """
    ``(center_id, a_value, b_value)`` for centers present in both lists with
    the metric defined on both sides, sorted by center
    """
    a_by_center = {r.center_id: r for r in a_reports}
    b_by_center = {r.center_id: r for r in b_reports}
    pairs = []
    for center in sorted(set(a_by_center) & set(b_by_center), key=lambda c: (c is None, c)):
        a_value = a_by_center[center].value(metric, category)
        b_value = b_by_center[center].value(metric, category)
        if a_value is None or b_value is None:
            logger.warning("Center %s has no %s for %s; left out of the pairing", center, metric, category)
            continue
        pairs.append((center, float(a_value), float(b_value)))
    return pairs


@dataclass(frozen=True)
class TostRow:
    metric: str
    category: str
    result: Optional[TostResult]
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "metric": self.metric,
            "category": self.category,
            "result": self.result.to_dict() if self.result else None,
            "reason": self.reason,
        }


def tost_compare(
    a_reports: Sequence[MetricsReport],
    b_reports: Sequence[MetricsReport],
    metric: str,
    category: str,
    margin: float = DEFAULT_MARGIN,
    alpha: float = DEFAULT_ALPHA,
) -> TostResult:
    """TOST of one metric/category between two per-center report lists"""
    pairs = paired_metric_series(a_reports, b_reports, metric, category)
    return tost_paired([p[1] for p in pairs], [p[2] for p in pairs], margin, alpha)


def tost_table(
    a_reports: Sequence[MetricsReport],
    b_reports: Sequence[MetricsReport],
    margin: float = DEFAULT_MARGIN,
    alpha: float = DEFAULT_ALPHA,
    metrics: Sequence[str] = CLASS_METRICS,
    categories: Sequence[str] = CATEGORIES,
) -> List[TostRow]:
    """
    TOST for every class-wise metric and category

    Comparisons with fewer than two usable center pairs are kept in the table
    with no result and the reason.
    """
    rows = []
    for metric in metrics:
        for category in categories:
            try:
                result = tost_compare(a_reports, b_reports, metric, category, margin, alpha)
                rows.append(TostRow(metric, category, result))
            except InvalidArgumentError as exc:
                rows.append(TostRow(metric, category, None, exc.detail))
    return rows
