"""Pearson coefficients, correlation tables and strength classification.

Undefined coefficients are represented by ``None`` throughout and shown as
``N/A`` in reports. They are never replaced by zero: averages simply leave
them out of both the sum and the count.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import EmptyInput, LengthMismatch, TooFewPoints, ZeroVariance
from .model import CompanySeries, WindowLabel

PRICE_TYPES = ("Open", "Close", "High", "Low")
MATRIX_COLUMNS = ("Open", "High", "Low", "Close", "Score", "Scale")

DEFAULT_CONTROL_TOLERANCE = 0.05
_CLAMP_EPS = 1e-12

Coefficient = Optional[float]


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson's correlation coefficient of two equally long samples.

    Two-pass evaluation: means first, then centred cross and square sums,
    each accumulated with :func:`math.fsum` so the sums are correctly
    rounded. The result is symmetric in its arguments bit for bit.

    Raises:
        LengthMismatch: the samples differ in length.
        TooFewPoints: fewer than two observations.
        ZeroVariance: either sample is constant.
    """
    n = len(xs)
    if n != len(ys):
        raise LengthMismatch(f"length mismatch: {n} vs {len(ys)}")
    if n < 2:
        raise TooFewPoints(f"need at least 2 points, got {n}")
    # An exact constancy test; fsum(x)/n can miss a constant by one ulp.
    if min(xs) == max(xs) or min(ys) == max(ys):
        raise ZeroVariance("constant series")

    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("constant series")

    prod = sxx * syy
    if math.isfinite(prod) and prod >= 1e-290:
        denom = math.sqrt(prod)
    else:
        denom = math.sqrt(sxx) * math.sqrt(syy)
    r = sxy / denom
    if abs(r) > 1.0 + _CLAMP_EPS:
        raise ArithmeticError(f"coefficient {r!r} outside [-1, 1]")
    return max(-1.0, min(1.0, r))


def safe_pearson(xs: Sequence[float], ys: Sequence[float]) -> Coefficient:
    """:func:`pearson`, with degenerate inputs mapped to ``None``."""
    try:
        return pearson(xs, ys)
    except (TooFewPoints, ZeroVariance):
        return None


def mean_defined(values) -> Coefficient:
    """Mean over the non-``None`` values; ``None`` if there are none."""
    present = [v for v in values if v is not None]
    if not present:
        return None
    return math.fsum(present) / len(present)


# -- per-window rows and tables --------------------------------------------

@dataclass(frozen=True)
class CorrelationRow:
    company: str
    window: WindowLabel
    coefficients: Mapping[str, Coefficient]

    def __post_init__(self):
        object.__setattr__(self, "window", WindowLabel(self.window))
        coeffs = {k: self.coefficients.get(k) for k in PRICE_TYPES}
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def avg(self) -> Coefficient:
        values = [self.coefficients[k] for k in PRICE_TYPES]
        if any(v is None for v in values):
            return None
        return math.fsum(values) / len(values)

    def cell(self, column: str) -> Coefficient:
        if column in ("Avg", "Avg."):
            return self.avg
        return self.coefficients[column]

    @classmethod
    def not_available(cls, company: str, window: WindowLabel) -> "CorrelationRow":
        return cls(company, window, {})


@dataclass(frozen=True)
class AverageRow:
    """Bottom row of a report table; every column is averaged independently."""

    coefficients: Mapping[str, Coefficient]
    avg: Coefficient

    def cell(self, column: str) -> Coefficient:
        if column in ("Avg", "Avg."):
            return self.avg
        return self.coefficients[column]


@dataclass(frozen=True)
class CorrelationReportTable:
    window: WindowLabel
    rows: tuple[CorrelationRow, ...]
    average_row: AverageRow


def trend_price_row(series: CompanySeries, window: WindowLabel) -> CorrelationRow:
    """Correlate the trend score with each of the four prices over ``series``."""
    scores = series.column("Score")
    coeffs = {k: safe_pearson(scores, series.column(k)) for k in PRICE_TYPES}
    return CorrelationRow(series.company, window, coeffs)


def aggregate_table(rows: Sequence[CorrelationRow]) -> CorrelationReportTable:
    """Attach the column averages. N/A cells are excluded per column."""
    rows = tuple(rows)
    if not rows:
        raise EmptyInput("cannot aggregate an empty table")
    windows = {r.window for r in rows}
    if len(windows) != 1:
        raise ValueError(f"rows span several windows: {sorted(map(str, windows))}")
    average = AverageRow(
        {k: mean_defined(r.coefficients[k] for r in rows) for k in PRICE_TYPES},
        mean_defined(r.avg for r in rows),
    )
    return CorrelationReportTable(rows[0].window, rows, average)


# -- correlation matrix and control check -----------------------------------

@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric matrix of pairwise coefficients, indexed by column name.

    ``matrix["Open"]["Close"]`` is the coefficient of those two columns, or
    ``None`` when undefined.
    """

    columns: tuple[str, ...]
    cells: Mapping[str, Mapping[str, Coefficient]]

    def __getitem__(self, column: str) -> Mapping[str, Coefficient]:
        return self.cells[column]


def matrix_from_columns(data: Mapping[str, Sequence[float]]) -> CorrelationMatrix:
    """Pairwise matrix over arbitrary named columns of equal length.

    The diagonal is 1.0, or ``None`` for a constant (or too short) column.
    """
    columns = tuple(data)
    cells: dict[str, dict[str, Coefficient]] = {c: {} for c in columns}
    for i, a in enumerate(columns):
        for b in columns[i:]:
            if a == b:
                r = None if safe_pearson(data[a], data[a]) is None else 1.0
            else:
                r = safe_pearson(data[a], data[b])
            cells[a][b] = cells[b][a] = r
    return CorrelationMatrix(columns, {c: dict(cells[c]) for c in columns})


def pairwise_matrix(series: CompanySeries,
                    columns: Sequence[str] = MATRIX_COLUMNS) -> CorrelationMatrix:
    """Every column of ``series`` against every other (Open, High, Low, Close, Score, Scale)."""
    return matrix_from_columns({c: series.column(c) for c in columns})


@dataclass(frozen=True)
class ControlCheckResult:
    deviations: Mapping[str, Coefficient]
    max_deviation: Coefficient
    passed: bool
    tolerance: float
    skipped: bool = False
    note: str = ""


def control_check(matrix: CorrelationMatrix,
                  tolerance: float = DEFAULT_CONTROL_TOLERANCE) -> ControlCheckResult:
    """Compare how Scale and Score each correlate with the four prices.

    Scale is derived from Score, so the two should correlate with every
    price almost identically. A large gap points to a processing fault.
    A constant Scale carries no information and the check is skipped.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    if matrix["Scale"]["Scale"] is None:
        return ControlCheckResult({k: None for k in PRICE_TYPES}, None, True, tolerance,
                                  skipped=True, note="Scale is constant; control check skipped")
    deviations: dict[str, Coefficient] = {}
    for k in PRICE_TYPES:
        a, b = matrix["Scale"][k], matrix["Score"][k]
        deviations[k] = None if a is None or b is None else abs(a - b)
    defined = [d for d in deviations.values() if d is not None]
    if not defined:
        return ControlCheckResult(deviations, None, True, tolerance,
                                  note="no defined deviations")
    worst = max(defined)
    return ControlCheckResult(deviations, worst, worst <= tolerance, tolerance)


# -- strength classification ------------------------------------------------

class Strength(str, enum.Enum):
    NEGLIGIBLE = "Negligible"
    WEAK = "Weak"
    MODERATE = "Moderate"
    STRONG = "Strong"


class Sign(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NONE = "None"


class Color(str, enum.Enum):
    GREEN = "Green"
    ORANGE = "Orange"
    RED = "Red"

    @property
    def token(self) -> str:
        return f"[{self.value[0]}]"


@dataclass(frozen=True)
class StrengthBand:
    strength: Strength
    sign: Sign
    color: Color

    @property
    def label(self) -> str:
        if self.sign is Sign.NONE:
            return self.strength.value
        return f"{self.strength.value} {self.sign.value}"


def classify(r: float) -> StrengthBand:
    """Band, sign and report colour for a coefficient.

    |r| in [0.6, 1] is Strong, [0.3, 0.6) Moderate, (0.1, 0.3) Weak and
    [0, 0.1] Negligible. Colour is Green above 0.3, Red below -0.3 and
    Orange otherwise.
    """
    if not (math.isfinite(r) and -1.0 <= r <= 1.0):
        raise ValueError(f"coefficient must be finite and within [-1, 1], got {r!r}")
    a = abs(r)
    if a >= 0.6:
        strength = Strength.STRONG
    elif a >= 0.3:
        strength = Strength.MODERATE
    elif a > 0.1:
        strength = Strength.WEAK
    else:
        strength = Strength.NEGLIGIBLE
    sign = Sign.POSITIVE if r > 0 else Sign.NEGATIVE if r < 0 else Sign.NONE
    color = Color.GREEN if r > 0.3 else Color.RED if r < -0.3 else Color.ORANGE
    return StrengthBand(strength, sign, color)
