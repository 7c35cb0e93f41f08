"""Reading, fetching and persisting the raw price and trend data.

Two input formats are understood:

* finance-portal price exports, ``Date,Open,High,Low,Close,Adj Close,Volume``
  (``Adj Close`` is ignored and ``Volume`` may be missing), and
* trend snapshots, ``Date,Score,Scale`` (``Scale`` defaults to 1.0).

Snapshots written by :func:`write_snapshots` use fixed headers, ISO dates and
a deterministic row order so a rerun on the same inputs yields identical
bytes.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Optional, Sequence, Union

from .errors import (BadRow, DuplicateDate, MalformedHeader, NetworkError,
                     UnexpectedPayload)
from .model import (AnalysisWindow, CompanySeries, MergedRecord, PriceBar,
                    TrendPoint)

log = logging.getLogger(__name__)

Raw = Union[bytes, str, IO[bytes], IO[str]]

PRICE_REQUIRED = ("Date", "Open", "High", "Low", "Close")
PRICE_OPTIONAL = ("Adj Close", "Volume")
TREND_REQUIRED = ("Date", "Score")
TREND_OPTIONAL = ("Scale",)

TREND_HEADER = ("Date", "Score", "Scale")
VALUE_HEADER = ("Date", "Open", "High", "Low", "Close")
MERGED_HEADER = ("Date", "Open", "High", "Low", "Close", "Score", "Scale")

DEFAULT_CHART_URL = ("https://query1.finance.yahoo.com/v8/finance/chart/{ticker}"
                     "?period1={start}&period2={end}&interval=1d")
DEFAULT_USER_AGENT = "eventlens/0.1"
HTTP_TIMEOUT = 30.0


@dataclass(frozen=True)
class SourceConfig:
    """Where one company's data comes from.

    Exactly one of ``price_file`` / ``price_url`` is set. ``price_url`` is a
    template with ``{ticker}``, ``{start}`` and ``{end}`` placeholders (the
    latter two in epoch seconds). ``price_fallback`` is an optional local
    export used when the remote fetch fails or the network is off limits.
    """

    company: str
    ticker: str
    trend_keyword: str
    trend_file: Path
    date_range: AnalysisWindow
    price_file: Optional[Path] = None
    price_url: Optional[str] = None
    price_fallback: Optional[Path] = None
    user_agent: str = DEFAULT_USER_AGENT

    def __post_init__(self):
        if (self.price_file is None) == (self.price_url is None):
            raise ValueError(f"{self.company}: set exactly one of price_file / price_url")


@dataclass
class ParseResult:
    """Outcome of a lenient parse. ``accepted + rejected + skipped`` covers every input row."""

    records: list
    rejected: list[BadRow] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)

    @property
    def row_count(self) -> int:
        return len(self.records) + len(self.rejected) + len(self.skipped)

    def raise_for_rejects(self) -> None:
        if self.rejected:
            first = self.rejected[0]
            raise BadRow(first.line, first.reason, others=len(self.rejected) - 1)


def _text(raw: Raw) -> str:
    if hasattr(raw, "read"):
        raw = raw.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8-sig")
    elif raw.startswith("\ufeff"):
        raw = raw[1:]
    return raw


def _rows(raw: Raw, required, optional):
    """Yield ``(line_no, {column: value})`` after validating the header."""
    text = _text(raw)
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header is None:
        raise MalformedHeader([], ",".join(required))
    header = [h.strip() for h in header]
    allowed = set(required) | set(optional)
    if (any(c not in header for c in required) or any(h not in allowed for h in header)
            or len(set(header)) != len(header)):
        raise MalformedHeader(header, ",".join(required + optional))
    for row in reader:
        yield reader.line_num, (dict(zip(header, (v.strip() for v in row)))
                                if any(v.strip() for v in row) else None), len(row) == len(header)


def _parse_date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise ValueError(f"unparsable date {text!r} (expected YYYY-MM-DD)") from None


def _parse_float(name: str, text: str) -> float:
    if text == "" or text.lower() == "null":
        raise ValueError(f"missing {name}")
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"unparsable {name} {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite {name} {text!r}")
    return value


def _collect(raw: Raw, required, optional, build) -> ParseResult:
    result = ParseResult([])
    for line, row, complete in _rows(raw, required, optional):
        if row is None:
            result.skipped.append(line)
            continue
        if not complete:
            result.rejected.append(BadRow(line, "wrong number of fields"))
            continue
        try:
            result.records.append(build(row))
        except ValueError as exc:
            result.rejected.append(BadRow(line, str(exc)))
    return result


def _finish(records: list) -> list:
    records.sort(key=lambda r: r.date)
    for prev, cur in zip(records, records[1:]):
        if prev.date == cur.date:
            raise DuplicateDate(cur.date)
    return records


def _price_bar(row: dict) -> PriceBar:
    day = _parse_date(row["Date"])
    o, h, l, c = (_parse_float(k.lower(), row[k]) for k in ("Open", "High", "Low", "Close"))
    volume = None
    text = row.get("Volume", "")
    if text and text.lower() != "null":
        v = _parse_float("volume", text)
        if v != int(v):
            raise ValueError(f"volume must be an integer, got {text!r}")
        volume = int(v)
    return PriceBar(day, o, h, l, c, volume)


def _trend_point(row: dict) -> TrendPoint:
    scale = row.get("Scale", "")
    return TrendPoint(_parse_date(row["Date"]), _parse_float("score", row["Score"]),
                      _parse_float("scale", scale) if scale else 1.0)


def _merged_record(row: dict) -> MergedRecord:
    bar = _price_bar(row)
    point = _trend_point(row)
    return MergedRecord.join(bar, point)


def read_price_csv(raw: Raw) -> ParseResult:
    """Lenient price parse: collects rejects instead of raising on them."""
    return _collect(raw, PRICE_REQUIRED, PRICE_OPTIONAL, _price_bar)


def read_trend_csv(raw: Raw) -> ParseResult:
    return _collect(raw, TREND_REQUIRED, TREND_OPTIONAL, _trend_point)


def parse_price_csv(raw: Raw) -> list[PriceBar]:
    """Parse a price export into date-ordered bars.

    Raises:
        MalformedHeader: required columns missing or unknown columns present.
        BadRow: a row is unparsable, incomplete or violates an OHLC invariant;
            the first offending line is reported along with the reject count.
        DuplicateDate: two rows share a date.
    """
    result = read_price_csv(raw)
    result.raise_for_rejects()
    return _finish(result.records)


def parse_trend_csv(raw: Raw) -> list[TrendPoint]:
    result = read_trend_csv(raw)
    result.raise_for_rejects()
    return _finish(result.records)


def parse_merged_csv(raw: Raw) -> list[MergedRecord]:
    result = _collect(raw, MERGED_HEADER, (), _merged_record)
    result.raise_for_rejects()
    return _finish(result.records)


# -- remote chart payloads ---------------------------------------------------

def _dig(payload, path: Sequence):
    node = payload
    walked = ""
    for key in path:
        if isinstance(key, int):
            walked += f"[{key}]"
            ok = isinstance(node, list) and len(node) > key
        else:
            walked += f".{key}" if walked else key
            ok = isinstance(node, dict) and node.get(key) is not None
        if not ok:
            raise UnexpectedPayload(walked)
        node = node[key]
    return node


def parse_chart_payload(payload: dict) -> ParseResult:
    """Turn a v8 chart JSON response into price bars.

    Days with any null OHLC entry are skipped (listed in ``skipped`` by
    timestamp index); days that are present but invalid are rejected.
    Dates are taken in exchange-local time using ``meta.gmtoffset`` if given.
    """
    result = _dig(payload, ["chart", "result", 0])
    stamps = _dig(payload, ["chart", "result", 0, "timestamp"])
    quote = _dig(payload, ["chart", "result", 0, "indicators", "quote", 0])
    arrays = {}
    for name in ("open", "high", "low", "close"):
        arrays[name] = _dig(payload, ["chart", "result", 0, "indicators", "quote", 0, name])
    volumes = quote.get("volume") or [None] * len(stamps)
    offset = int((result.get("meta") or {}).get("gmtoffset") or 0)

    out = ParseResult([])
    for i, ts in enumerate(stamps):
        try:
            values = [arrays[k][i] for k in ("open", "high", "low", "close")]
        except IndexError:
            raise UnexpectedPayload(f"chart.result[0].indicators.quote[0] (short arrays at {i})") from None
        if ts is None or any(v is None for v in values):
            log.info("skipping day %d of chart payload: null entry", i)
            out.skipped.append(i)
            continue
        day = dt.datetime.fromtimestamp(int(ts) + offset, tz=dt.timezone.utc).date()
        vol = volumes[i] if i < len(volumes) else None
        try:
            out.records.append(PriceBar(day, *(float(v) for v in values),
                                        None if vol is None else int(vol)))
        except ValueError as exc:
            out.rejected.append(BadRow(i, str(exc)))
    return out


def _epoch(day: dt.date) -> int:
    return int(dt.datetime(day.year, day.month, day.day, tzinfo=dt.timezone.utc).timestamp())


def chart_url(config: SourceConfig) -> str:
    start = config.date_range.start
    # period2 is exclusive, so extend past the last requested day
    end = config.date_range.end + dt.timedelta(days=1)
    return config.price_url.format(ticker=config.ticker, start=_epoch(start), end=_epoch(end))


def fetch_price_history(config: SourceConfig, session=None,
                        retries: int = 1, backoff: float = 1.0) -> list[PriceBar]:
    """Download daily bars for ``config`` from its chart endpoint.

    One GET, retried once on connection errors, timeouts and 5xx replies.
    The parsed bars go through the same validation as :func:`parse_price_csv`.
    """
    import requests

    if config.price_url is None:
        raise ValueError(f"{config.company}: no remote price source configured")
    session = session or requests.Session()
    url = chart_url(config)
    headers = {"User-Agent": config.user_agent}
    response = None
    for attempt in range(retries + 1):
        try:
            response = session.get(url, headers=headers, timeout=HTTP_TIMEOUT)
        except (requests.ConnectionError, requests.Timeout) as exc:
            if attempt == retries:
                raise NetworkError(f"{config.ticker}: {exc}") from exc
        else:
            if response.status_code < 500 or attempt == retries:
                break
        log.warning("%s: transient failure fetching prices, retrying", config.ticker)
        time.sleep(backoff)
    if response.status_code != 200:
        raise NetworkError(f"{config.ticker}: HTTP {response.status_code} from {url}")
    try:
        payload = response.json()
    except ValueError as exc:
        raise UnexpectedPayload("<body is not JSON>") from exc

    result = parse_chart_payload(payload)
    if result.skipped:
        log.warning("%s: skipped %d day(s) with null prices", config.ticker, len(result.skipped))
    result.raise_for_rejects()
    bars = _finish(result.records)
    return [b for b in bars if b.date in config.date_range]


# -- snapshots ----------------------------------------------------------------

def _fmt_price(x: float) -> str:
    return f"{x:.6f}"


def _fmt_trend(x: float) -> str:
    return repr(float(x))


def csv_bytes(header: Sequence[str], rows: Iterable[Sequence[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def trend_csv(trends: Sequence[TrendPoint]) -> bytes:
    rows = sorted(trends, key=lambda t: t.date)
    return csv_bytes(TREND_HEADER, ((t.date.isoformat(), _fmt_trend(t.score), _fmt_trend(t.scale))
                                     for t in rows))


def value_csv(prices: Sequence[PriceBar]) -> bytes:
    rows = sorted(prices, key=lambda b: b.date)
    return csv_bytes(VALUE_HEADER, ((b.date.isoformat(), *map(_fmt_price, (b.open, b.high, b.low, b.close)))
                                     for b in rows))


def merged_csv(merged: Sequence[MergedRecord]) -> bytes:
    rows = sorted(merged, key=lambda r: r.date)
    return csv_bytes(MERGED_HEADER, ((r.date.isoformat(),
                                       *map(_fmt_price, (r.open, r.high, r.low, r.close)),
                                       _fmt_trend(r.score), _fmt_trend(r.scale)) for r in rows))


def snapshot_paths(out_dir: Path, ticker: str) -> dict[str, Path]:
    out_dir = Path(out_dir)
    return {kind: out_dir / f"{ticker}_{kind}.csv" for kind in ("trend", "value", "merged")}


def write_snapshots(out_dir, ticker: str, prices: Sequence[PriceBar],
                    trends: Sequence[TrendPoint], merged: Sequence[MergedRecord]) -> dict[str, Path]:
    """Write ``<ticker>_trend.csv``, ``<ticker>_value.csv`` and ``<ticker>_merged.csv``.

    Prices are written with 6 decimals, trend values losslessly. IO failures
    are re-raised as ``OSError`` naming the path.
    """
    paths = snapshot_paths(out_dir, ticker)
    payloads = {"trend": trend_csv(trends), "value": value_csv(prices), "merged": merged_csv(merged)}
    for kind, path in paths.items():
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(payloads[kind])
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write snapshot {path}: {exc.strerror}") from exc
    return paths


def load_series(path, company: str, ticker: str) -> CompanySeries:
    with open(path, "rb") as fh:
        return CompanySeries(company, ticker, parse_merged_csv(fh))


# -- spot-check verification ------------------------------------------------------

@dataclass(frozen=True)
class Mismatch:
    date: dt.date
    field: str
    snapshot: object
    source: object


@dataclass(frozen=True)
class VerificationReport:
    company: str
    checked: tuple[dt.date, ...]
    mismatches: tuple[Mismatch, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "company": self.company,
            "ok": self.ok,
            "checked": [d.isoformat() for d in self.checked],
            "mismatches": [{"date": m.date.isoformat(), "field": m.field,
                            "snapshot": m.snapshot, "source": m.source} for m in self.mismatches],
        }


# half a unit in the 6th decimal, the snapshot price precision
_PRICE_TOL = 5e-7 + 1e-12


def verify_against_source(snapshot: CompanySeries, raw_prices: Sequence[PriceBar],
                          raw_trends: Sequence[TrendPoint], sample_size: int = 10,
                          seed: int = 0) -> VerificationReport:
    """Re-derive a seeded random sample of snapshot rows from the raw inputs.

    When ``sample_size`` reaches the row count every row is checked once.
    Mismatches are reported, not raised.
    """
    if sample_size < 1:
        raise ValueError("sample_size must be at least 1")
    records = snapshot.records
    n = len(records)
    if sample_size >= n:
        picks = list(range(n))
    else:
        picks = sorted(random.Random(seed).sample(range(n), sample_size))

    prices = {b.date: b for b in raw_prices}
    trends = {t.date: t for t in raw_trends}
    mismatches = []
    for i in picks:
        rec = records[i]
        bar, point = prices.get(rec.date), trends.get(rec.date)
        if bar is None:
            mismatches.append(Mismatch(rec.date, "date", rec.date.isoformat(), "absent from prices"))
        else:
            for name in ("open", "high", "low", "close"):
                a, b = getattr(rec, name), getattr(bar, name)
                if abs(a - b) > _PRICE_TOL:
                    mismatches.append(Mismatch(rec.date, name, a, b))
        if point is None:
            mismatches.append(Mismatch(rec.date, "date", rec.date.isoformat(), "absent from trends"))
        else:
            for name in ("score", "scale"):
                a, b = getattr(rec, name), getattr(point, name)
                if a != b:
                    mismatches.append(Mismatch(rec.date, name, a, b))
    return VerificationReport(snapshot.company, tuple(records[i].date for i in picks),
                              tuple(mismatches))
