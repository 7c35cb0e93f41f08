"""Exception hierarchy shared across eventlens."""

from __future__ import annotations

import datetime as dt


class EventLensError(Exception):
    """Base class for every error raised by eventlens."""


# -- ingestion ---------------------------------------------------------------

class ValidationError(EventLensError, ValueError):
    """Raw input failed validation."""


class MalformedHeader(ValidationError):
    def __init__(self, header, expected):
        self.header = list(header)
        self.expected = expected
        super().__init__(f"malformed header {self.header!r}; expected {expected}")


class BadRow(ValidationError):
    """A single input row was rejected.

    ``line`` is the 1-based physical line number in the source file (the
    header is line 1). For rows that came from a JSON payload it is the
    0-based index into the timestamp array.
    """

    def __init__(self, line: int, reason: str, others: int = 0):
        self.line = line
        self.reason = reason
        self.others = others
        msg = f"line {line}: {reason}"
        if others:
            msg += f" (+{others} more rejected rows)"
        super().__init__(msg)


class DuplicateDate(ValidationError):
    def __init__(self, date: dt.date):
        self.date = date
        super().__init__(f"duplicate date {date.isoformat()}")


class NetworkError(EventLensError):
    pass


class UnexpectedPayload(EventLensError):
    """The chart payload lacks a required field; ``path`` names the first one missing."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(path)


# -- analysis ----------------------------------------------------------------

class CorrelationError(EventLensError, ValueError):
    """Coefficient is undefined for the given inputs."""


class LengthMismatch(CorrelationError):
    pass


class TooFewPoints(CorrelationError):
    pass


class ZeroVariance(CorrelationError):
    pass


class EmptyInput(EventLensError, ValueError):
    pass


# -- orchestration -----------------------------------------------------------

class ConfigError(EventLensError):
    pass


class MissingSnapshot(EventLensError):
    def __init__(self, company: str, path):
        self.company = company
        self.path = path
        super().__init__(f"{company}: snapshot not found at {path}")
