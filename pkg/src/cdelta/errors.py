"""Exception hierarchy shared by the whole package.

Every domain error derives from :class:`CdeltaError` and carries a stable
machine-readable ``kind`` plus an optional ``context`` mapping, so the CLI
can serialize failures without string matching.
"""

from __future__ import annotations


class CdeltaError(Exception):
    """Base class for all errors raised by this package."""

    kind = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class SeriesTooShort(CdeltaError):
    """A series has fewer values than the operation requires."""

    kind = "series_too_short"


class NonFiniteValue(CdeltaError):
    """A series contains NaN or an infinity."""

    kind = "non_finite_value"


class LengthMismatch(CdeltaError):
    """The two series of a paired sample differ in length."""

    kind = "length_mismatch"


class UndefinedDivergence(CdeltaError):
    """At least one group is constant, so there is no divergence to compare.

    This is the 0/0 case: a meaningful diagnostic outcome, not a crash.
    The CLI maps it to exit code 2 so pipelines can detect it.
    """

    kind = "undefined_divergence"


class InvalidPermutationCount(CdeltaError):
    """Monte Carlo benchmarking needs at least one permutation."""

    kind = "invalid_permutation_count"


class TooManyPermutations(CdeltaError):
    """Exhaustive enumeration is limited to small samples (n! pairings)."""

    kind = "too_many_permutations"


class EmptyNull(CdeltaError):
    """A null distribution with zero samples cannot be summarized."""

    kind = "empty_null"


class ZeroVariance(CdeltaError):
    """A constant series has no variance, so correlation is undefined."""

    kind = "zero_variance"


class ColumnNotFound(CdeltaError):
    """A column selector matched neither a header name nor a valid index."""

    kind = "column_not_found"


class ParseError(CdeltaError):
    """A cell could not be parsed as a finite real number.

    ``row`` is the zero-based data row (the header row, when present, is
    not counted); ``col`` is the resolved column label.
    """

    kind = "parse_error"

    def __init__(self, message: str, row: int, col: str):
        super().__init__(message, row=row, col=col)
        self.row = row
        self.col = col


class EmptyAfterDrop(CdeltaError):
    """Pairwise dropping of missing values removed every row."""

    kind = "empty_after_drop"


class ManifestError(CdeltaError):
    """A batch manifest is missing, malformed, or inconsistent."""

    kind = "manifest_error"
