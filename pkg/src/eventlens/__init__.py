"""eventlens: search-attention versus stock-price correlation around event dates."""

from .correlation import (ControlCheckResult, CorrelationMatrix, CorrelationReportTable,
                          CorrelationRow, StrengthBand, aggregate_table, classify,
                          control_check, pairwise_matrix, pearson, trend_price_row)
from .model import (AnalysisWindow, CompanySeries, EventRegistry, MergedRecord, PriceBar,
                    TrendPoint, WindowLabel, merge_on_dates, restrict_to_window,
                    split_by_event)

__version__ = "0.1.0"

__all__ = [
    "AnalysisWindow", "CompanySeries", "ControlCheckResult", "CorrelationMatrix",
    "CorrelationReportTable", "CorrelationRow", "EventRegistry", "MergedRecord",
    "PriceBar", "StrengthBand", "TrendPoint", "WindowLabel", "aggregate_table",
    "classify", "control_check", "merge_on_dates", "pairwise_matrix", "pearson",
    "restrict_to_window", "split_by_event", "trend_price_row",
]
