"""Run configuration: a JSON document describing companies, window and output.

Example::

    {
      "companies": [
        {"company": "Moderna", "ticker": "MRNA", "trend_keyword": "Moderna",
         "price_file": "MRNA_prices.csv", "trend_file": "MRNA_trends.csv",
         "event_date": "2020-12-21"}
      ],
      "window": {"start": "2020-01-01", "end": "2021-04-13"},
      "output_dir": "out",
      "control_tolerance": 0.05,
      "seed": 0
    }

Relative data paths are resolved against the config file's directory.
``price_url`` may replace ``price_file`` (``"default"`` selects the public
chart endpoint), optionally with a ``price_fallback`` file.
"""

from __future__ import annotations

import datetime as dt
import json
import os
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from .correlation import DEFAULT_CONTROL_TOLERANCE
from .errors import ConfigError, EmptyInput
from .ingest import DEFAULT_CHART_URL, DEFAULT_USER_AGENT, SourceConfig
from .model import DEFAULT_WINDOW, AnalysisWindow, EventRegistry, WindowLabel

OUT_ENV = "EVENTLENS_OUT"
DEFAULT_OUT = "eventlens_out"


@dataclass(frozen=True)
class RunConfig:
    sources: tuple[SourceConfig, ...]
    events: EventRegistry
    window: AnalysisWindow = DEFAULT_WINDOW
    output_dir: Optional[Path] = None
    control_tolerance: float = DEFAULT_CONTROL_TOLERANCE
    seed: int = 0

    def __post_init__(self):
        names = [s.company for s in self.sources]
        tickers = [s.ticker for s in self.sources]
        if len(set(names)) != len(names) or len(set(tickers)) != len(tickers):
            raise ConfigError("company names and tickers must be unique")
        if self.control_tolerance < 0:
            raise ConfigError("control_tolerance must be non-negative")

    def require_companies(self) -> None:
        if not self.sources:
            raise EmptyInput("config lists no companies")

    def resolve_output(self, override=None) -> Path:
        """``--out`` beats the config, which beats ``$EVENTLENS_OUT``."""
        chosen = override or self.output_dir or os.environ.get(OUT_ENV) or DEFAULT_OUT
        return Path(chosen)

    def with_overrides(self, output_dir=None, seed=None) -> "RunConfig":
        return replace(self,
                       output_dir=Path(output_dir) if output_dir else self.output_dir,
                       seed=self.seed if seed is None else seed)


def _date(value, what: str) -> dt.date:
    try:
        return dt.date.fromisoformat(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: expected an ISO date, got {value!r}") from None


def _path(base: Path, value) -> Optional[Path]:
    if value is None:
        return None
    p = Path(value)
    return p if p.is_absolute() else base / p


def parse_config(doc: dict, base_dir=".") -> RunConfig:
    base = Path(base_dir)
    if not isinstance(doc, dict) or not isinstance(doc.get("companies"), list):
        raise ConfigError("config must be an object with a 'companies' list")
    try:
        win = doc.get("window") or {}
        window = AnalysisWindow(WindowLabel.FULL,
                                _date(win.get("start", DEFAULT_WINDOW.start.isoformat()), "window.start"),
                                _date(win.get("end", DEFAULT_WINDOW.end.isoformat()), "window.end"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    user_agent = doc.get("user_agent", DEFAULT_USER_AGENT)

    sources, events = [], {}
    for i, entry in enumerate(doc["companies"]):
        try:
            company, ticker = entry["company"], entry["ticker"]
            url = entry.get("price_url")
            if url == "default":
                url = DEFAULT_CHART_URL
            sources.append(SourceConfig(
                company=company,
                ticker=ticker,
                trend_keyword=entry.get("trend_keyword", company),
                trend_file=_path(base, entry["trend_file"]),
                date_range=window,
                price_file=_path(base, entry.get("price_file")),
                price_url=url,
                price_fallback=_path(base, entry.get("price_fallback")),
                user_agent=user_agent,
            ))
        except KeyError as exc:
            raise ConfigError(f"companies[{i}]: missing key {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"companies[{i}]: {exc}") from None
        event = entry.get("event_date")
        events[company] = None if event is None else _date(event, f"{company}.event_date")

    out = doc.get("output_dir")
    return RunConfig(
        sources=tuple(sources),
        events=EventRegistry(events),
        window=window,
        output_dir=Path(out) if out else None,
        control_tolerance=float(doc.get("control_tolerance", DEFAULT_CONTROL_TOLERANCE)),
        seed=int(doc.get("seed", 0)),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(doc, path.parent)


def bundled_config_path() -> Path:
    """The packaged five-company synthetic fixture."""
    return Path(str(resources.files("eventlens") / "data" / "config.json"))
