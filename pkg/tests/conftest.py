import datetime as dt
import random
import shutil

import pytest

from eventlens.config import bundled_config_path
from eventlens.model import CompanySeries, MergedRecord

D0 = dt.date(2021, 1, 4)


def day(offset: int) -> dt.date:
    return D0 + dt.timedelta(days=offset)


def record(date, close=10.0, score=50.0, scale=1.0, spread=0.5):
    return MergedRecord(date, close, close + spread, close - spread, close, score, scale)


def make_series(closes, scores, scales=None, company="Acme", ticker="ACME", start=0):
    scales = scales or [1.0] * len(closes)
    recs = [MergedRecord(day(start + i), c, c + 0.5, c - 0.5, c, s, k)
            for i, (c, s, k) in enumerate(zip(closes, scores, scales))]
    return CompanySeries(company, ticker, recs)


@pytest.fixture
def fixture_dir(tmp_path):
    """A private copy of the bundled five-company dataset and its config."""
    src = bundled_config_path().parent
    dst = tmp_path / "data"
    shutil.copytree(src, dst)
    return dst


def shuffle_scores(path, seed=7):
    """Permute the Score column of a merged snapshot in place, leaving Scale alone."""
    lines = path.read_text().splitlines()
    header, body = lines[0], [l.split(",") for l in lines[1:]]
    col = header.split(",").index("Score")
    scores = [r[col] for r in body]
    random.Random(seed).shuffle(scores)
    for r, s in zip(body, scores):
        r[col] = s
    path.write_text("\n".join([header] + [",".join(r) for r in body]) + "\n")


# -- acceptance summary --------------------------------------------------------

_criteria = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    if report.failed:
        _criteria[key] = False
    elif report.when == "call":
        _criteria.setdefault(key, True)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k.split()[0])):
        terminalreporter.write_line(f"{'PASS' if _criteria[key] else 'FAIL'}  criterion {key}")
