"""Paired nonparametric bootstrap over items."""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ..core.condition import PROTOCOL_CONDITIONS, Condition
from ..core.errors import InvalidParams, TooFewItems
from .metrics import METRIC_NAMES, ConditionScores, metric_values

logger = logging.getLogger(__name__)

MIN_ITEMS = 10
MIN_RESAMPLES = 100
CI_LEVEL = 0.95

Interval = Tuple[float, float]


def resample_indices(n_items: int, b: int, seed: int) -> np.ndarray:
    """(b, n_items) item indices drawn with replacement from one seeded generator."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, n_items, size=(b, n_items))


def bootstrap_ci(
    scores: ConditionScores,
    b: int = 1000,
    seed: int = 0,
    point: Optional[Dict[str, Optional[float]]] = None,
) -> Dict[str, Interval]:
    """
    Percentile intervals for every computable metric.

    Each resample draws one index set and recomputes all metrics from it, so
    condition comparisons stay paired. Intervals are clamped to contain the
    point estimate when one is given.

    Args:
        scores: Paired per-item scores
        b: Number of resamples
        seed: Seed of the resampling generator
        point: Point estimates by metric name (for clamping)

    Returns:
        Metric name -> (lo, hi) at the 95% level

    Raises:
        TooFewItems: Fewer than 10 paired items
        InvalidParams: b < 100
    """
    scores.require(*PROTOCOL_CONDITIONS)
    if scores.n_items < MIN_ITEMS:
        raise TooFewItems(f"Bootstrap needs at least {MIN_ITEMS} items, got {scores.n_items}")
    if b < MIN_RESAMPLES:
        raise InvalidParams(f"Bootstrap needs at least {MIN_RESAMPLES} resamples, got {b}")

    idx = resample_indices(scores.n_items, b, seed)

    def resampled(condition: Condition) -> Optional[np.ndarray]:
        vector = scores.vectors.get(condition)
        if vector is None:
            return None
        return vector[idx].mean(axis=1)

    values = metric_values(
        resampled(Condition.FULL),
        resampled(Condition.SYMT),
        resampled(Condition.SYMV),
        resampled(Condition.TEXT_ONLY),
        resampled(Condition.BASE_TEXT),
    )

    tail = 100.0 * (1.0 - CI_LEVEL) / 2.0
    intervals: Dict[str, Interval] = {}
    for name in METRIC_NAMES:
        samples = values.get(name)
        if samples is None:
            continue
        lo, hi = np.percentile(samples, [tail, 100.0 - tail])
        lo, hi = float(lo), float(hi)
        estimate = (point or {}).get(name)
        if estimate is not None:
            lo, hi = min(lo, estimate), max(hi, estimate)
        intervals[name] = (lo, hi)

    logger.debug(f"Bootstrap over {scores.n_items} items, b={b}, seed={seed}")
    return intervals


def half_width(interval: Interval) -> float:
    return (interval[1] - interval[0]) / 2.0
