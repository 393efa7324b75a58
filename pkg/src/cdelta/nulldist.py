"""Empirical null distributions for the coefficient under re-pairing.

The coefficient's denominator does not depend on how the two groups are
paired, only the numerator's alignment does.  Holding x fixed and shuffling
which y goes with which x therefore produces the distribution of values
expected when the pairing carries no relationship, and the observed value
can be placed inside it (a classical permutation test).

Reproducibility contract: permutation ``t`` of a run is drawn from a
numpy PCG64 generator seeded with ``SeedSequence([seed, t])``.  Each
permutation therefore has its own deterministic stream, so results are
bit-identical for identical inputs regardless of evaluation order, and
individual permutations can be recomputed in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import factorial

import numpy as np

from .core import CdeltaConfig, PairedSample, _combine, _require_comparable, divergence_profile
from .errors import EmptyNull, InvalidPermutationCount, NonFiniteValue, TooManyPermutations

__all__ = [
    "RNG_SPEC",
    "MAX_EXHAUSTIVE_N",
    "NullDistribution",
    "NullSummary",
    "permutation_null",
    "exhaustive_null",
    "summarize_null",
]

RNG_SPEC = "numpy PCG64, SeedSequence([seed, permutation_index])"

# 8! = 40320 pairings; beyond that exhaustive enumeration stops being an
# oracle and starts being a benchmark.
MAX_EXHAUSTIVE_N = 8

DEFAULT_PERMUTATIONS = 1000


@dataclass(frozen=True, eq=False)
class NullDistribution:
    """Coefficient values under re-paired samples, in permutation order."""

    samples: np.ndarray
    k: int
    seed: int
    config: CdeltaConfig
    rng: str = RNG_SPEC


@dataclass(frozen=True)
class NullSummary:
    """Placement of an observed value inside a null distribution.

    ``percentile`` counts strictly smaller null samples;
    ``pseudo_p = (1 + #{sample >= observed}) / (k + 1)`` uses the add-one
    convention so it can never be zero.
    """

    observed: float
    percentile: float
    pseudo_p: float
    mean: float
    sd: float
    quantiles: dict[str, float] = field(default_factory=dict)


def _pairing_parts(sample: PairedSample, config: CdeltaConfig):
    """Profiles and denominator shared by every re-pairing of the sample.

    Re-pairing permutes y's values together with their divergences, so the
    profiles (and hence the denominator) are computed once; only the
    numerator's alignment varies.
    """
    _require_comparable(sample)
    dx = divergence_profile(sample.x, config.variant).d
    dy = divergence_profile(sample.y, config.variant).d
    denominator = _combine(dx, dy, config).denominator
    return dx, dy, denominator


def _permutation(seed: int, index: int, n: int) -> np.ndarray:
    """The documented sub-seeded permutation for one Monte Carlo draw."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    return rng.permutation(n)


def permutation_null(
    sample: PairedSample,
    config: CdeltaConfig | None = None,
    k: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
) -> NullDistribution:
    """Monte Carlo null: k uniformly random re-pairings of y against x.

    Deterministic in (sample, config, k, seed); see the module docstring
    for the sub-seeding contract.
    """
    config = config or CdeltaConfig()
    if k < 1:
        raise InvalidPermutationCount(f"permutation count must be >= 1, got {k}", k=k)
    dx, dy, denominator = _pairing_parts(sample, config)
    n = dx.size
    samples = np.empty(k)
    for t in range(k):
        perm = _permutation(seed, t, n)
        samples[t] = float(np.sum(dx * dy[perm])) / denominator
    samples.setflags(write=False)
    return NullDistribution(samples=samples, k=k, seed=seed, config=config)


def exhaustive_null(
    sample: PairedSample,
    config: CdeltaConfig | None = None,
) -> NullDistribution:
    """Exact null: every one of the n! re-pairings, in lexicographic order.

    Only available for n <= 8; used to validate :func:`permutation_null`.
    """
    config = config or CdeltaConfig()
    n = sample.n
    if n > MAX_EXHAUSTIVE_N:
        raise TooManyPermutations(
            f"exhaustive enumeration supports n <= {MAX_EXHAUSTIVE_N}, got {n}",
            n=n,
        )
    dx, dy, denominator = _pairing_parts(sample, config)
    k = factorial(n)
    samples = np.empty(k)
    for t, perm in enumerate(permutations(range(n))):
        samples[t] = float(np.sum(dx * dy[np.asarray(perm)])) / denominator
    samples.setflags(write=False)
    return NullDistribution(
        samples=samples,
        k=k,
        seed=0,
        config=config,
        rng="exhaustive enumeration, lexicographic permutation order",
    )


def summarize_null(null: NullDistribution, observed: float) -> NullSummary:
    """Place an observed coefficient inside a null distribution."""
    if null.k == 0 or null.samples.size == 0:
        raise EmptyNull("cannot summarize an empty null distribution")
    if not np.isfinite(observed):
        raise NonFiniteValue("observed value must be finite")
    samples = null.samples
    k = int(samples.size)
    below = int(np.count_nonzero(samples < observed))
    at_or_above = k - below
    q01, q05, q50, q95, q99 = (
        float(q) for q in np.quantile(samples, [0.01, 0.05, 0.50, 0.95, 0.99])
    )
    return NullSummary(
        observed=float(observed),
        percentile=100.0 * below / k,
        pseudo_p=(1 + at_or_above) / (k + 1),
        mean=float(samples.mean()),
        sd=float(samples.std()),
        quantiles={"q01": q01, "q05": q05, "q50": q50, "q95": q95, "q99": q99},
    )
