"""Command line entry point and pipeline orchestration.

``ingest`` reads (or fetches) each company's prices and trends, joins them
and writes the trend/value/merged snapshots. ``analyze`` reads the merged
snapshots back and writes the per-window report tables, correlation
matrices, scatter plots and a JSON summary. ``run`` does both.

Exit codes: 0 success, 1 input or config error, 2 control check failed
(all analysis output is still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from . import correlation as corr
from . import ingest, report
from .config import RunConfig, bundled_config_path, load_config
from .errors import (ConfigError, EmptyInput, EventLensError, MissingSnapshot,
                     NetworkError, UnexpectedPayload)
from .model import (CompanySeries, WindowLabel, merge_on_dates, restrict_to_window,
                    split_by_event)

log = logging.getLogger("eventlens")

EXIT_OK, EXIT_INPUT, EXIT_CONTROL = 0, 1, 2
VERIFY_SAMPLE = 10


def _dump_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _read_bytes(path: Path, company: str, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise EventLensError(f"{company}: cannot read {what} file {path}: {exc.strerror}") from None


def _load_prices(source: ingest.SourceConfig, offline: bool) -> list:
    if source.price_file is not None:
        raw = _read_bytes(source.price_file, source.company, "price")
        return ingest.parse_price_csv(raw)
    if offline:
        if source.price_fallback is None:
            raise EventLensError(f"{source.company}: network disabled and no price_fallback configured")
        log.warning("%s: offline, reading prices from %s", source.company, source.price_fallback)
    else:
        try:
            return ingest.fetch_price_history(source)
        except (NetworkError, UnexpectedPayload) as exc:
            if source.price_fallback is None:
                raise EventLensError(f"{source.company}: price fetch failed: {exc}") from None
            log.warning("%s: price fetch failed (%s); using %s", source.company, exc,
                        source.price_fallback)
    raw = _read_bytes(source.price_fallback, source.company, "price fallback")
    return ingest.parse_price_csv(raw)


def ingest_company(source: ingest.SourceConfig, out: Path, seed: int,
                   offline: bool = False) -> dict:
    """Ingest one company; returns its summary entry. Raises on invalid input."""
    prices = _load_prices(source, offline)
    trends = ingest.parse_trend_csv(_read_bytes(source.trend_file, source.company, "trend"))
    window = source.date_range
    prices = [b for b in prices if b.date in window]
    trends = [t for t in trends if t.date in window]
    merged = merge_on_dates(prices, trends)
    paths = ingest.write_snapshots(out, source.ticker, prices, trends, merged)

    snapshot = ingest.load_series(paths["merged"], source.company, source.ticker)
    check = ingest.verify_against_source(snapshot, prices, trends, VERIFY_SAMPLE, seed)
    if not check.ok:
        raise EventLensError(f"{source.company}: snapshot verification found "
                             f"{len(check.mismatches)} mismatch(es)")
    log.info("%s: %d prices, %d trend points, %d merged rows; %d rows verified",
             source.company, len(prices), len(trends), len(merged), len(check.checked))
    return {"prices": len(prices), "trends": len(trends), "merged": len(merged),
            "files": sorted(p.name for p in paths.values()),
            "verification": check.to_dict()}


def cmd_ingest(config: RunConfig, out: Path, offline: bool = False) -> int:
    try:
        config.require_companies()
    except EmptyInput as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    out.mkdir(parents=True, exist_ok=True)
    summary, failed = {}, []
    for source in config.sources:
        try:
            summary[source.company] = ingest_company(source, out, config.seed, offline)
        except (EventLensError, OSError) as exc:
            msg = str(exc)
            if not msg.startswith(source.company):
                msg = f"{source.company}: {msg}"
            log.error("%s", msg)
            failed.append(source.company)
            summary[source.company] = {"error": msg}
    _dump_json(out / "ingest_summary.json", {"companies": summary, "failed": failed})
    return EXIT_INPUT if failed else EXIT_OK


def company_windows(series: CompanySeries, config: RunConfig
                    ) -> list[tuple[WindowLabel, Optional[CompanySeries]]]:
    """Full window plus pre/post splits; the splits are ``None`` without an event."""
    full = restrict_to_window(series, config.window)
    event = config.events.get(series.company)
    if event is None:
        return [(WindowLabel.FULL, full), (WindowLabel.PRE, None), (WindowLabel.POST, None)]
    pre, post = split_by_event(full, event)
    return [(WindowLabel.FULL, full), (WindowLabel.PRE, pre), (WindowLabel.POST, post)]


def analyze(config: RunConfig, out: Path) -> tuple[dict, bool]:
    """Write every analysis artifact; returns ``(summary, all_controls_passed)``."""
    config.require_companies()
    series = []
    for source in config.sources:
        path = ingest.snapshot_paths(out, source.ticker)["merged"]
        if not path.exists():
            raise MissingSnapshot(source.company, path)
        series.append(ingest.load_series(path, source.company, source.ticker))

    rows = {label: [] for label in WindowLabel}
    controls = []
    for s in series:
        windows = company_windows(s, config)
        full = windows[0][1]
        present = [(label, w) for label, w in windows if w is not None]
        for plot in report.company_plots(full, present):
            (out / f"{s.ticker}_{plot.window.value}.svg").write_bytes(report.render_scatter(plot))
        for label, w in windows:
            if w is None:
                rows[label].append(corr.CorrelationRow.not_available(s.company, label))
                continue
            rows[label].append(corr.trend_price_row(w, label))
            matrix = corr.pairwise_matrix(w)
            (out / f"{s.ticker}_{label.value}_matrix.csv").write_bytes(report.render_matrix(matrix))
            check = corr.control_check(matrix, config.control_tolerance)
            if not check.passed:
                log.warning("%s %s: control check failed, max deviation %.4f > %.4f",
                            s.company, label.value, check.max_deviation, check.tolerance)
            controls.append({
                "company": s.company, "window": label.value, "records": len(w),
                "passed": check.passed, "skipped": check.skipped, "note": check.note,
                "max_deviation": check.max_deviation, "deviations": dict(check.deviations),
                "tolerance": check.tolerance,
            })

    tables = {}
    for label in WindowLabel:
        table = corr.aggregate_table(rows[label])
        for fmt, ext in (("markdown", "md"), ("csv", "csv")):
            (out / f"report_{label.value}.{ext}").write_bytes(report.render_table(table, fmt))
        tables[label.value] = {
            "rows": {r.company: {**dict(r.coefficients), "Avg": r.avg} for r in table.rows},
            "average": {**dict(table.average_row.coefficients), "Avg": table.average_row.avg},
        }

    failed = [f"{c['company']} ({c['window']})" for c in controls if not c["passed"]]
    summary = {"window": {"start": config.window.start.isoformat(),
                          "end": config.window.end.isoformat()},
               "tables": tables, "control_checks": controls, "control_failures": failed}
    _dump_json(out / "summary.json", summary)
    return summary, not failed


def cmd_analyze(config: RunConfig, out: Path) -> int:
    try:
        summary, ok = analyze(config, out)
    except (EventLensError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    if not ok:
        log.warning("control check failed for: %s", ", ".join(summary["control_failures"]))
        return EXIT_CONTROL
    return EXIT_OK


def cmd_run(config: RunConfig, out: Path, offline: bool = False) -> int:
    code = cmd_ingest(config, out, offline)
    if code != EXIT_OK:
        return code
    return cmd_analyze(config, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventlens",
        description="Correlate search-trend attention with stock prices around event dates.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("ingest", "parse/fetch sources and write snapshots"),
                       ("analyze", "build reports and plots from snapshots"),
                       ("run", "ingest then analyze")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", type=Path,
                       help="JSON run config (default: bundled synthetic fixture)")
        p.add_argument("--out", type=Path, help="output directory (else config, else $EVENTLENS_OUT)")
        p.add_argument("--offline", action="store_true", help="never touch the network")
        p.add_argument("--seed", type=int, help="seed for snapshot spot checks")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", force=True)
    try:
        config = load_config(args.config or bundled_config_path())
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        log.error("%s", exc)
        return EXIT_INPUT
    config = config.with_overrides(output_dir=args.out, seed=args.seed)
    out = config.resolve_output()

    if args.command == "ingest":
        return cmd_ingest(config, out, args.offline)
    if args.command == "analyze":
        return cmd_analyze(config, out)
    return cmd_run(config, out, args.offline)


if __name__ == "__main__":
    sys.exit(main())
