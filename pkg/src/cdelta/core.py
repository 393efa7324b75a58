"""Correlation of divergency (c-delta) and its divergence profiles.

The coefficient compares how values diverge *within* each of two paired
groups, rather than how the paired values co-vary.  For each point the
divergence from all other points in its own group is measured, the two
per-point magnitudes are multiplied and summed (signal), and the result is
normalized by the product of the groups' average divergences (noise), which
makes the coefficient scale-invariant.

Two variants are supported:

* ``SQUARED``: per-point divergence is the root of the summed squared
  differences to every other point,
  ``d_i = sqrt(sum_{j != i} (v_i - v_j)^2)``.
* ``ABSOLUTE``: per-point divergence is the plain sum of absolute
  differences, ``d_i = sum_{j != i} |v_i - v_j|`` (the per-point form of
  the Gini mean difference).

Two normalization conventions are supported, because the method's published
worked numbers and its typeset denominator disagree by a constant factor:

* ``RAW``: the denominator is the product of the plain profile means,
  ``(mean of d_x) * (mean of d_y)``.  This reproduces the published worked
  examples and is the default.
* ``FORMULA``: the denominator additionally carries a ``1/(n-1)`` factor
  inside each per-point term, exactly as the typeset equation reads.  For
  the squared variant this divides the RAW denominator by ``n - 1``; for
  the absolute variant, by ``(n - 1)^2``.

The two conventions differ only by that constant, so rescaled values
(:func:`rescaled_cdelta`) are identical under both.

Each profile is computed by a fast path: an algebraic identity after mean
centering for ``SQUARED`` (O(n)), and sort plus prefix sums for
``ABSOLUTE`` (O(n log n)).  :func:`divergence_profile_naive` keeps the
literal quadratic form as a verification oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    LengthMismatch,
    NonFiniteValue,
    SeriesTooShort,
    UndefinedDivergence,
)

__all__ = [
    "Variant",
    "Normalization",
    "CdeltaConfig",
    "RealSeries",
    "PairedSample",
    "pair",
    "as_series",
    "DivergenceProfile",
    "CdeltaValue",
    "CdeltaReport",
    "divergence_profile",
    "divergence_profile_naive",
    "cdelta",
    "self_similarity",
    "cdelta_max",
    "rescaled_cdelta",
]


class Variant(enum.Enum):
    """Which divergence magnitude the profiles use."""

    SQUARED = "squared"
    ABSOLUTE = "absolute"


class Normalization(enum.Enum):
    """Denominator convention; see the module docstring."""

    FORMULA = "formula"
    RAW = "raw"


@dataclass(frozen=True)
class CdeltaConfig:
    """Selects the variant and the normalization convention."""

    variant: Variant = Variant.SQUARED
    normalization: Normalization = Normalization.RAW


class RealSeries:
    """A finite sequence of real measurements for one group.

    Values are coerced to a read-only float64 array.  NaNs and infinities
    are rejected at construction, so downstream code never re-checks.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64, ndmin=1)
        if arr.ndim != 1:
            raise TypeError("a series must be one-dimensional")
        if arr.size == 0:
            raise SeriesTooShort("a series must contain at least one value", n=0)
        if not np.isfinite(arr).all():
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise NonFiniteValue(
                f"series contains a non-finite value at position {bad}",
                position=bad,
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("RealSeries is immutable")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def is_constant(self) -> bool:
        # Bitwise-equal extremes.  Near-constant series remain valid inputs,
        # though results are then numerically delicate.
        return float(self.values.min()) == float(self.values.max())

    def __repr__(self):
        shown = np.array2string(self.values, threshold=8)
        return f"RealSeries(n={self.n}, values={shown})"


def as_series(values) -> RealSeries:
    """Coerce an array-like to a :class:`RealSeries` (no-op if it is one)."""
    if isinstance(values, RealSeries):
        return values
    return RealSeries(values)


class PairedSample:
    """Two index-aligned groups of equal length.

    Pairing is positional: the coefficient's numerator sums over a shared
    index, so the i-th values of both groups must belong together.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        x = as_series(x)
        y = as_series(y)
        if x.n != y.n:
            raise LengthMismatch(
                f"paired series must have equal length (x has {x.n}, y has {y.n})",
                x_n=x.n,
                y_n=y.n,
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("PairedSample is immutable")

    @property
    def n(self) -> int:
        return self.x.n

    def __repr__(self):
        return f"PairedSample(n={self.n})"


def pair(x, y) -> PairedSample:
    """Convenience constructor for a :class:`PairedSample`."""
    return PairedSample(x, y)


@dataclass(frozen=True, eq=False)
class DivergenceProfile:
    """Per-point divergence magnitudes of one series (all entries >= 0)."""

    d: np.ndarray
    variant: Variant

    @property
    def n(self) -> int:
        return self.d.size


@dataclass(frozen=True)
class CdeltaValue:
    """One computed coefficient with its signal/noise decomposition."""

    value: float
    numerator: float
    denominator: float
    config: CdeltaConfig
    n: int


@dataclass(frozen=True)
class CdeltaReport:
    """Observed coefficient with its sample-relative rescaling.

    ``cdelta_max`` is the larger of the two self-similarities and acts as
    the attainable upper bound for this sample, so ``rescaled`` lies in
    (0, 1].  (The geometric mean ``sqrt(self_x * self_y)`` is a provably
    tighter bound by the Cauchy-Schwarz inequality, but the max-of-selves
    convention is kept as the method defines it.)
    """

    observed: CdeltaValue
    self_x: CdeltaValue
    self_y: CdeltaValue
    cdelta_max: float
    rescaled: float


# --------------------------------------------------------------------------
# divergence profiles
# --------------------------------------------------------------------------


def _squared_profile(w: np.ndarray) -> np.ndarray:
    # sum_{j != i} (w_i - w_j)^2 == n*w_i^2 - 2*w_i*S + Q
    # with S = sum(w), Q = sum(w^2).  Valid only after centering, which
    # bounds the cancellation between the three terms.
    n = w.size
    s = float(np.sum(w))
    q = float(np.sum(w * w))
    t = n * (w * w) - (2.0 * s) * w + q
    # Roundoff may leave tiny negatives (within -1e-9 * Q after centering).
    np.maximum(t, 0.0, out=t)
    return np.sqrt(t)


def _absolute_profile(w: np.ndarray) -> np.ndarray:
    # After sorting, sum_j |w_k - w_j| at sorted position k (zero-based) is
    #   (2k + 1 - n) * w_k + total - before_k - through_k
    # where through_k is the prefix sum including position k.
    n = w.size
    order = np.argsort(w, kind="stable")
    sw = w[order]
    through = np.cumsum(sw)
    before = through - sw
    total = float(through[-1])
    k = np.arange(n, dtype=np.float64)
    a = (2.0 * k + 1.0 - n) * sw + (total - before - through)
    np.maximum(a, 0.0, out=a)
    d = np.empty_like(a)
    d[order] = a
    return d


def divergence_profile(series, variant: Variant = Variant.SQUARED) -> DivergenceProfile:
    """Compute the per-point divergence profile of one series (fast path).

    SQUARED runs in O(n) via the centered sum-of-squares identity; ABSOLUTE
    runs in O(n log n) via sorting and prefix sums.  Results agree with
    :func:`divergence_profile_naive` to within roundoff.

    Raises ``SeriesTooShort`` if the series has fewer than two values.
    """
    v = as_series(series)
    if v.n < 2:
        raise SeriesTooShort(
            "divergence needs at least two values (a single point has no "
            "within-group divergence)",
            n=v.n,
        )
    if v.is_constant:
        return DivergenceProfile(d=np.zeros(v.n), variant=variant)
    # Centering is safe (all pairwise differences are unchanged) and keeps
    # the identities above accurate for series with large means.
    w = v.values - v.values.mean()
    if variant is Variant.SQUARED:
        d = _squared_profile(w)
    else:
        d = _absolute_profile(w)
    return DivergenceProfile(d=d, variant=variant)


def divergence_profile_naive(series, variant: Variant = Variant.SQUARED) -> DivergenceProfile:
    """Literal O(n^2) transcription of the divergence sums.

    Kept as the verification oracle for :func:`divergence_profile`: no
    centering, no algebraic rearrangement, one explicit pass per point.
    """
    v = as_series(series)
    if v.n < 2:
        raise SeriesTooShort("divergence needs at least two values", n=v.n)
    vals = v.values
    d = np.empty(v.n)
    for i in range(v.n):
        diff = vals[i] - vals  # the j == i term is exactly zero
        if variant is Variant.SQUARED:
            d[i] = math.sqrt(float(np.sum(diff * diff)))
        else:
            d[i] = float(np.sum(np.abs(diff)))
    return DivergenceProfile(d=d, variant=variant)


# --------------------------------------------------------------------------
# the coefficient
# --------------------------------------------------------------------------


def _require_comparable(sample: PairedSample) -> None:
    if sample.n < 2:
        raise SeriesTooShort(
            "the coefficient needs at least two paired values", n=sample.n
        )
    const_x = sample.x.is_constant
    const_y = sample.y.is_constant
    if const_x or const_y:
        which = "both groups" if const_x and const_y else (
            "group x" if const_x else "group y"
        )
        raise UndefinedDivergence(
            f"{which} constant: there is no divergence to compare (0/0)",
            constant_x=const_x,
            constant_y=const_y,
        )


def _combine(dx: np.ndarray, dy: np.ndarray, config: CdeltaConfig) -> CdeltaValue:
    """Assemble the coefficient from two precomputed profiles."""
    n = dx.size
    numerator = float(np.sum(dx * dy))
    denominator = (float(np.sum(dx)) / n) * (float(np.sum(dy)) / n)
    if config.normalization is Normalization.FORMULA:
        if config.variant is Variant.SQUARED:
            denominator /= n - 1
        else:
            denominator /= (n - 1) * (n - 1)
    if denominator <= 0.0:
        # Non-constant input whose divergence underflowed to zero; there is
        # no representable pattern to compare.
        raise UndefinedDivergence(
            "divergence underflowed to zero; no pattern to compare",
            constant_x=False,
            constant_y=False,
        )
    return CdeltaValue(
        value=numerator / denominator,
        numerator=numerator,
        denominator=denominator,
        config=config,
        n=n,
    )


def cdelta(sample: PairedSample, config: CdeltaConfig | None = None) -> CdeltaValue:
    """Correlation of divergency between the two groups of a paired sample.

    The value is nonnegative and unbounded above; it is invariant under
    translation and (nonzero, including negative) rescaling of either
    group, and under joint permutation of the pairing.

    Raises ``UndefinedDivergence`` when either group is constant: the
    coefficient is then 0/0 and deliberately *not* reported as a number.
    """
    config = config or CdeltaConfig()
    _require_comparable(sample)
    dx = divergence_profile(sample.x, config.variant).d
    dy = divergence_profile(sample.y, config.variant).d
    return _combine(dx, dy, config)


def self_similarity(series, config: CdeltaConfig | None = None) -> CdeltaValue:
    """The coefficient of a series paired with itself.

    This is the largest value the sample can certify and anchors the
    rescaling in :func:`rescaled_cdelta`.
    """
    v = as_series(series)
    return cdelta(PairedSample(v, v), config)


def cdelta_max(sample: PairedSample, config: CdeltaConfig | None = None) -> float:
    """Sample-relative upper bound: the larger of the two self-similarities."""
    config = config or CdeltaConfig()
    _require_comparable(sample)
    sx = self_similarity(sample.x, config)
    sy = self_similarity(sample.y, config)
    return max(sx.value, sy.value)


def rescaled_cdelta(sample: PairedSample, config: CdeltaConfig | None = None) -> CdeltaReport:
    """Observed coefficient rescaled into (0, 1] by the sample's own maximum.

    ``rescaled == observed / max(self_x, self_y)``.  The Cauchy-Schwarz
    inequality guarantees ``observed <= sqrt(self_x * self_y)``, so the
    ratio never exceeds 1; it equals 1 when the groups are elementwise
    identical.  The rescaled value is independent of the normalization
    convention (the constant factor cancels).
    """
    config = config or CdeltaConfig()
    _require_comparable(sample)
    observed = cdelta(sample, config)
    sx = self_similarity(sample.x, config)
    sy = self_similarity(sample.y, config)
    bound = max(sx.value, sy.value)
    return CdeltaReport(
        observed=observed,
        self_x=sx,
        self_y=sy,
        cdelta_max=bound,
        rescaled=observed.value / bound,
    )
