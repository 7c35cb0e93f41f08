"""Domain types plus the date join and event split.

Everything here is immutable and every operation is a pure function, so
different companies can be processed in parallel without coordination.
Dates are plain :class:`datetime.date` values; there is no time-zone
handling anywhere in the model.
"""

from __future__ import annotations

import datetime as dt
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

PRICE_FIELDS = ("open", "high", "low", "close")


def _check_price(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a finite positive price, got {value!r}")


def _check_ohlc(open_: float, high: float, low: float, close: float) -> None:
    for name, value in zip(PRICE_FIELDS, (open_, high, low, close)):
        _check_price(name, value)
    if low > high:
        raise ValueError(f"low {low} > high {high}")
    if low > min(open_, close):
        raise ValueError(f"low {low} > min(open, close) {min(open_, close)}")
    if high < max(open_, close):
        raise ValueError(f"high {high} < max(open, close) {max(open_, close)}")


def _check_trend(score: float, scale: float) -> None:
    if not (math.isfinite(score) and 0.0 <= score <= 100.0):
        raise ValueError(f"score must lie in [0, 100], got {score!r}")
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError(f"scale must be positive, got {scale!r}")


@dataclass(frozen=True)
class PriceBar:
    """One trading day of OHLC prices. ``volume`` is carried but never analysed."""

    date: dt.date
    open: float
    high: float
    low: float
    close: float
    volume: Optional[int] = None

    def __post_init__(self):
        _check_ohlc(self.open, self.high, self.low, self.close)
        if self.volume is not None and self.volume < 0:
            raise ValueError(f"volume must be non-negative, got {self.volume}")


@dataclass(frozen=True)
class TrendPoint:
    """Relative search interest (0-100) for one day and its rescaling factor."""

    date: dt.date
    score: float
    scale: float = 1.0

    def __post_init__(self):
        _check_trend(self.score, self.scale)


@dataclass(frozen=True)
class MergedRecord:
    date: dt.date
    open: float
    high: float
    low: float
    close: float
    score: float
    scale: float

    def __post_init__(self):
        _check_ohlc(self.open, self.high, self.low, self.close)
        _check_trend(self.score, self.scale)

    @classmethod
    def join(cls, bar: PriceBar, point: TrendPoint) -> "MergedRecord":
        return cls(bar.date, bar.open, bar.high, bar.low, bar.close,
                   point.score, point.scale)

    def value(self, column: str) -> float:
        """Look up a column by its report name (``"Close"``, ``"Score"``, ...)."""
        return getattr(self, column.lower())


@dataclass(frozen=True)
class CompanySeries:
    company: str
    ticker: str
    records: tuple[MergedRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        for prev, cur in zip(self.records, self.records[1:]):
            if cur.date <= prev.date:
                raise ValueError(
                    f"{self.company}: dates must be strictly ascending "
                    f"({prev.date} then {cur.date})")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[MergedRecord]:
        return iter(self.records)

    @property
    def dates(self) -> list[dt.date]:
        return [r.date for r in self.records]

    def column(self, name: str) -> list[float]:
        return [r.value(name) for r in self.records]

    def with_records(self, records: Iterable[MergedRecord]) -> "CompanySeries":
        return CompanySeries(self.company, self.ticker, tuple(records))


class WindowLabel(str, enum.Enum):
    FULL = "Full"
    PRE = "PreRollout"
    POST = "PostRollout"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AnalysisWindow:
    label: WindowLabel
    start: dt.date
    end: dt.date

    def __post_init__(self):
        object.__setattr__(self, "label", WindowLabel(self.label))
        if self.start > self.end:
            raise ValueError(f"window start {self.start} is after end {self.end}")

    def __contains__(self, day: dt.date) -> bool:
        return self.start <= day <= self.end


# Vaccine rollout start dates. NovaVax had none inside the window.
ROLLOUT_DATES: dict[str, Optional[dt.date]] = {
    "Moderna": dt.date(2020, 12, 21),
    "Pfizer": dt.date(2020, 12, 14),
    "NovaVax": None,
    "AstraZeneca": dt.date(2021, 1, 4),
    "Johnson & Johnson": dt.date(2021, 3, 2),
}

DEFAULT_WINDOW = AnalysisWindow(WindowLabel.FULL, dt.date(2020, 1, 1), dt.date(2021, 4, 13))


@dataclass(frozen=True)
class EventRegistry:
    """Company name to optional event date.

    A company that is unknown, or registered with ``None``, has no event and
    is left out of the pre/post analysis. There is never a default date.
    """

    events: Mapping[str, Optional[dt.date]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "events", dict(self.events))

    def get(self, company: str) -> Optional[dt.date]:
        return self.events.get(company)

    def __contains__(self, company: str) -> bool:
        return self.events.get(company) is not None

    @classmethod
    def vaccine_rollouts(cls) -> "EventRegistry":
        return cls(ROLLOUT_DATES)


def merge_on_dates(prices: Sequence[PriceBar],
                   trends: Sequence[TrendPoint]) -> list[MergedRecord]:
    """Inner-join prices and trend points on date.

    Days present in only one source (weekends, market holidays, missing
    trend points) fall out. No resampling or interpolation is done, so a
    weekly trend series simply keeps the trading days it lands on.
    """
    by_date = {p.date: p for p in trends}
    merged = [MergedRecord.join(bar, by_date[bar.date])
              for bar in prices if bar.date in by_date]
    merged.sort(key=lambda r: r.date)
    return merged


def split_by_event(series: CompanySeries,
                   event: dt.date) -> tuple[CompanySeries, CompanySeries]:
    """Split into (before event, on/after event). The event day itself is post."""
    pre = [r for r in series.records if r.date < event]
    post = [r for r in series.records if r.date >= event]
    return series.with_records(pre), series.with_records(post)


def restrict_to_window(series: CompanySeries, window: AnalysisWindow) -> CompanySeries:
    return series.with_records(r for r in series.records if r.date in window)
