"""Synthetic stand-ins for the five vaccine makers' price and trend data.

The real 2020-2021 snapshots are not archived, so the bundled dataset is
generated here. Attention is a smoothed random walk that jumps once the
company's rollout starts; prices load positively on attention before the
event and with a company-specific sign afterwards, which gives the
pipeline something recognisable to find. Prices go out as finance-portal
exports (trading days only) and trends as ``Date,Score,Scale`` files
covering every calendar day.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .ingest import csv_bytes
from .model import ROLLOUT_DATES, PriceBar, TrendPoint

START = dt.date(2020, 1, 1)
END = dt.date(2021, 5, 20)

# NYSE full-day closures inside START..END
MARKET_HOLIDAYS = frozenset(dt.date.fromisoformat(d) for d in (
    "2020-01-01", "2020-01-20", "2020-02-17", "2020-04-10", "2020-05-25",
    "2020-07-03", "2020-09-07", "2020-11-26", "2020-12-25", "2021-01-01",
    "2021-01-18", "2021-02-15", "2021-04-02",
))


@dataclass(frozen=True)
class CompanyProfile:
    company: str
    ticker: str
    base: float        # price level at zero attention
    beta_pre: float    # USD per trend point before the event
    beta_post: float   # USD per trend point on/after the event
    noise: float       # daily price noise, USD
    event: Optional[dt.date]


PROFILES = (
    CompanyProfile("Moderna", "MRNA", 22.0, 1.55, 0.25, 3.0, ROLLOUT_DATES["Moderna"]),
    CompanyProfile("Pfizer", "PFE", 33.0, 0.06, 0.05, 0.6, ROLLOUT_DATES["Pfizer"]),
    CompanyProfile("NovaVax", "NVAX", 18.0, 1.9, 1.9, 1.8, ROLLOUT_DATES["NovaVax"]),
    CompanyProfile("AstraZeneca", "AZN", 52.0, 0.02, -0.06, 1.5, ROLLOUT_DATES["AstraZeneca"]),
    CompanyProfile("Johnson & Johnson", "JNJ", 140.0, 0.2, -0.35, 2.5,
                   ROLLOUT_DATES["Johnson & Johnson"]),
)


def calendar(start: dt.date = START, end: dt.date = END) -> list[dt.date]:
    return [start + dt.timedelta(days=i) for i in range((end - start).days + 1)]


def is_trading_day(day: dt.date) -> bool:
    return day.weekday() < 5 and day not in MARKET_HOLIDAYS


def _attention(rng: np.random.Generator, days: list[dt.date], event: Optional[dt.date]) -> np.ndarray:
    n = len(days)
    steps = rng.normal(0.0, 1.0, n)
    walk = np.abs(np.cumsum(steps))
    kernel = np.ones(7) / 7.0
    level = np.convolve(walk, kernel, mode="same")
    # interest builds through the development phase
    ramp = np.linspace(0.0, 1.0, n) ** 2 * level.max()
    level = level + ramp
    if event is not None:
        after = np.array([d >= event for d in days])
        surge = rng.gamma(4.0, 0.6, n) * level.max() * 0.35
        level = np.where(after, level + level.max() * 0.6 + surge, level)
    level = level - level.min()
    return np.clip(np.rint(100.0 * level / level.max()), 0, 100)


def generate_company(profile: CompanyProfile, seed: int = 0
                     ) -> tuple[list[PriceBar], list[TrendPoint]]:
    """Price bars (trading days) and trend points (all days) for one company."""
    rng = np.random.default_rng([seed, sum(map(ord, profile.ticker))])
    days = calendar()
    scores = _attention(rng, days, profile.event)
    trends = [TrendPoint(d, float(s), 0.5 + float(s) / 50.0) for d, s in zip(days, scores)]

    bars = []
    drift = 0.0
    for day, score in zip(days, scores):
        if not is_trading_day(day):
            continue
        drift = 0.9 * drift + rng.normal(0.0, profile.noise)
        post = profile.event is not None and day >= profile.event
        beta = profile.beta_post if post else profile.beta_pre
        shift = (profile.beta_pre - profile.beta_post) * 60.0 if post else 0.0
        close = max(1.0, profile.base + shift + beta * score + drift)
        open_ = close * (1 + rng.normal(0, 0.008))
        open_, close = round(open_, 2), round(close, 2)
        high = max(round(max(open_, close) * (1 + abs(rng.normal(0, 0.01))), 2), max(open_, close))
        low = min(round(min(open_, close) * (1 - abs(rng.normal(0, 0.01))), 2), min(open_, close))
        volume = int(rng.integers(1_000_000, 30_000_000))
        bars.append(PriceBar(day, open_, high, max(low, 0.01), close, volume))
    return bars, trends


def price_export(bars: list[PriceBar]) -> bytes:
    """Finance-portal style CSV, ``Adj Close`` mirrored from ``Close``."""
    rows = ((b.date.isoformat(), f"{b.open:.2f}", f"{b.high:.2f}", f"{b.low:.2f}",
             f"{b.close:.2f}", f"{b.close:.2f}", str(b.volume)) for b in bars)
    return csv_bytes(("Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"), rows)


def trend_export(trends: list[TrendPoint]) -> bytes:
    return csv_bytes(("Date", "Score", "Scale"),
                      ((t.date.isoformat(), f"{t.score:g}", repr(t.scale)) for t in trends))


def write_fixture(directory, seed: int = 0, profiles=PROFILES) -> Path:
    """Write price/trend exports plus ``config.json`` and return the config path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    companies = []
    for p in profiles:
        bars, trends = generate_company(p, seed)
        (directory / f"{p.ticker}_prices.csv").write_bytes(price_export(bars))
        (directory / f"{p.ticker}_trends.csv").write_bytes(trend_export(trends))
        companies.append({
            "company": p.company,
            "ticker": p.ticker,
            "trend_keyword": p.company,
            "price_file": f"{p.ticker}_prices.csv",
            "trend_file": f"{p.ticker}_trends.csv",
            "event_date": p.event.isoformat() if p.event else None,
        })
    config = {
        "companies": companies,
        "window": {"start": "2020-01-01", "end": "2021-04-13"},
        "control_tolerance": 0.05,
        "seed": 0,
    }
    path = directory / "config.json"
    path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return path
