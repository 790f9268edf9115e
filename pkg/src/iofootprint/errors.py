"""Exception types shared across the package.

All data and numeric failures raise a subclass of :class:`FootprintError`,
so callers (and the command-line layer) can separate bad input from bugs.
"""

from __future__ import annotations


class FootprintError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(FootprintError):
    """Array shapes or lengths do not agree with the sector list."""


class NegativeEntry(FootprintError):
    """A value that must be nonnegative (and finite) is not.

    ``index`` locates the offending entry: a matrix position ``(i, j)``,
    a vector position ``i``, or a sector label, depending on context.
    """

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index


class ZeroTotal(FootprintError):
    """A sector has zero (or negative) total output; normalization divides by it."""

    def __init__(self, message: str, sector: str | None = None):
        super().__init__(message)
        self.sector = sector


class ImbalancedTable(FootprintError):
    """Supplied totals or value added violate the balance identities.

    Carries the :class:`~iofootprint.economy.BalanceReport` computed against
    the supplied figures, so callers can show per-sector residuals.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class KindMismatch(FootprintError):
    """A coefficient matrix or intensity vector of the wrong kind was passed."""


class SingularSystem(FootprintError):
    """The system matrix is singular to working precision.

    ``rcond`` is the estimated reciprocal condition number at failure.
    """

    def __init__(self, message: str, rcond: float | None = None):
        super().__init__(message)
        self.rcond = rcond


class Divergent(FootprintError):
    """The coefficient matrix has spectral radius at (or above) one."""


class Truncated(FootprintError):
    """A series was cut off at the term cap before reaching tolerance.

    ``partial`` holds the accumulated partial sum, ``terms`` how many series
    terms it contains, and ``residual`` the relative size of the next term.
    """

    def __init__(self, message: str, residual: float | None = None,
                 partial=None, terms: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.partial = partial
        self.terms = terms


class DomainError(FootprintError):
    """A scalar argument lies outside the mathematically valid range."""


class ParseError(FootprintError):
    """A file does not conform to the expected layout.

    ``line`` and ``column`` are 1-based positions in the source file when
    they are known.
    """

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class DuplicateSector(FootprintError):
    """The same sector label appears more than once."""


class MissingSector(FootprintError):
    """A sector required by the economy is absent from an input file."""


class UnknownSector(FootprintError):
    """An input file names a sector the economy does not contain."""


class ConditioningWarning(UserWarning):
    """The system matrix is poorly conditioned; results may lose accuracy."""
