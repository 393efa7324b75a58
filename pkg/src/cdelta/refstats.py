"""Pearson and Spearman coefficients for report context.

These are the standard association measures the divergence coefficient is
*not*: they compare paired values directly and are signed, whereas the
divergence coefficient compares within-group spread patterns and erases
direction.  Reports show them side by side so the contrast is visible
(e.g. an exact mirror pairing has Pearson -1 but rescaled divergence 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import PairedSample, RealSeries, as_series
from .errors import ZeroVariance

__all__ = [
    "CorrelationKind",
    "CorrelationValue",
    "pearson",
    "spearman",
    "rank_average",
]


class CorrelationKind(enum.Enum):
    PEARSON = "pearson"
    SPEARMAN = "spearman"


@dataclass(frozen=True)
class CorrelationValue:
    """A correlation coefficient in [-1, 1] with its kind."""

    r: float
    kind: CorrelationKind


def pearson(sample: PairedSample) -> CorrelationValue:
    """Product-moment correlation of the paired values.

    Uses the two-pass centered formulation, which is free of the
    cancellation that the textbook one-pass expansion suffers.
    """
    x = sample.x.values
    y = sample.y.values
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.sum(dx * dx))
    syy = float(np.sum(dy * dy))
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance(
            "correlation is undefined when a series is constant",
            constant_x=sxx == 0.0,
            constant_y=syy == 0.0,
        )
    r = float(np.sum(dx * dy)) / (math.sqrt(sxx) * math.sqrt(syy))
    # Roundoff can push |r| a few ulp past 1; clamp like mature libraries do.
    r = max(-1.0, min(1.0, r))
    return CorrelationValue(r=r, kind=CorrelationKind.PEARSON)


def spearman(sample: PairedSample) -> CorrelationValue:
    """Rank correlation: Pearson applied to average-ranked data."""
    ranked = PairedSample(rank_average(sample.x), rank_average(sample.y))
    return CorrelationValue(r=pearson(ranked).r, kind=CorrelationKind.SPEARMAN)


def rank_average(series) -> RealSeries:
    """Ranks 1..n, with ties getting the mean of the ranks they span."""
    v = as_series(series)
    _, inverse, counts = np.unique(v.values, return_inverse=True, return_counts=True)
    upper = np.cumsum(counts)  # rank of the last member of each tie block
    lower = upper - counts + 1
    return RealSeries(((lower + upper) / 2.0)[inverse])
