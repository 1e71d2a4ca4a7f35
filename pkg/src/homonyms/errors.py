"""Exception types raised by the homonyms package.

Everything user-facing derives from HomonymsError so callers (CLI, HTTP
service) can map the whole family to one failure mode.
"""


class HomonymsError(Exception):
    """Base class for domain and input errors."""


class EmptySupport(HomonymsError):
    """All weights are zero, leaving nothing to sample."""


class DuplicateLabel(HomonymsError):
    """The label sequence contains a repeated label."""


class NegativeWeight(HomonymsError):
    """A weight is negative."""


class InvalidAlpha(HomonymsError):
    """Zipf exponent outside the accepted range."""


class DegenerateInput(HomonymsError):
    """Count data carries no rank signal (single label or constant counts)."""


class EmptyInput(HomonymsError):
    """An input sequence is empty or has zero total mass."""


class TooLarge(HomonymsError):
    """A brute-force enumeration guard was exceeded."""


class OutOfDomain(HomonymsError):
    """Argument outside the open interval a transform is defined on."""


class InsufficientPoints(HomonymsError):
    """Too few curve points inside the fit window."""


class AllSaturated(HomonymsError):
    """Every in-window estimate is 0 or 1, so the fit would only see clamps."""


class DegenerateTable(HomonymsError):
    """A restricted contingency table has an all-zero row or column."""


class FileUnreadable(HomonymsError):
    """Input file missing, unreadable, or not valid UTF-8."""


class MissingHeader(HomonymsError):
    """CSV file lacks the required header columns."""


class EmptyAfterCleaning(HomonymsError):
    """Every input row was rejected during cleaning."""
