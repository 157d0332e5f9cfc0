"""Exception types shared across the package."""


class FairfeasError(Exception):
    """Base class for all package errors."""


class EmptyCounts(FairfeasError):
    """Confusion counts sum to zero."""


class KOutOfRange(FairfeasError):
    """k is outside [1, n]."""


class NotSorted(FairfeasError):
    """Input sequence violates the required non-increasing order."""


class TooFewGroups(FairfeasError):
    """An operation needs at least two groups."""


class DomainError(FairfeasError):
    """Argument outside the mathematical domain of the operation."""


class ZeroEpsP(FairfeasError):
    """Prevalence difference is zero; the equal-prevalence case is excluded."""


class SingularDenominator(FairfeasError):
    """The governing-equation denominator is (numerically) zero."""


class BadPrevalence(FairfeasError):
    """Prevalence index at an excluded boundary (0 or N)."""


class MismatchedSets(FairfeasError):
    """Triple sets do not correspond to the requested prevalence indices."""


class OverlappingBins(FairfeasError):
    """PPV bins overlap or leave the allowed index range."""


class BadSampleStep(FairfeasError):
    """Curve sampling step exceeds the detector radius."""


class MissingColumn(FairfeasError):
    """A declared column is absent from the CSV header."""


class MissingValue(FairfeasError):
    """A required cell is empty; carries the 0-based row index."""

    def __init__(self, row: int, column: str):
        self.row = row
        self.column = column
        super().__init__(f"missing value in column {column!r} at row {row}")


class EmptyFile(FairfeasError):
    """CSV file has no data rows."""


class EmptyGroup(FairfeasError):
    """A group produced by the grouping spec contains no rows."""


class TargetTooLarge(FairfeasError):
    """Requested sample size exceeds the cohort size."""


class Infeasible(FairfeasError):
    """No allocation satisfies the selection constraints."""


class TooManyGroups(FairfeasError):
    """The exact solver is limited to 8 groups."""
