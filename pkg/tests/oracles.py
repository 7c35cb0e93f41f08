"""Independent reference computations used to check the library.

None of these share code with eventlens. The Pearson oracle works in exact
integer arithmetic: every float is an exact dyadic rational, so scaling all
inputs to a common power-of-two denominator turns the textbook sums into
Python ints, and only the final square root and division are rounded (at
50 significant digits).
"""

from decimal import Decimal, localcontext


def _as_ints(values):
    ratios = [float(v).as_integer_ratio() for v in values]
    denom = max(q for _, q in ratios)
    return [p * (denom // q) for p, q in ratios]


def exact_pearson(xs, ys):
    """r = (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)), evaluated exactly."""
    n = len(xs)
    X, Y = _as_ints(xs), _as_ints(ys)
    sx, sy = sum(X), sum(Y)
    cov = n * sum(a * b for a, b in zip(X, Y)) - sx * sy
    vx = n * sum(a * a for a in X) - sx * sx
    vy = n * sum(b * b for b in Y) - sy * sy
    if vx == 0 or vy == 0:
        return None
    with localcontext() as ctx:
        ctx.prec = 50
        return float(Decimal(cov) / (Decimal(vx).sqrt() * Decimal(vy).sqrt()))


def intersect_dates(price_dates, trend_dates):
    """Brute-force nested-loop intersection, ascending."""
    out = []
    for p in price_dates:
        for t in trend_dates:
            if p == t and p not in out:
                out.append(p)
    return sorted(out)


def decimal_mean(values):
    """Exact decimal mean of published 4-d.p. cells (strings), skipping None."""
    present = [Decimal(v) for v in values if v is not None]
    return sum(present) / len(present)
