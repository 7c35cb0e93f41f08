# %% [markdown]
# # Table arithmetic
#
# Row averages need all four cells. Column averages skip N/A rows, so a company
# without an event date drops out of the denominator instead of counting as 0.

# %%
from eventlens.correlation import CorrelationRow, aggregate_table
from eventlens.report import render_table

cells = {
    "Moderna": (0.0604, 0.1134, 0.0710, 0.0111),
    "Pfizer": (0.3615, 0.4133, 0.3788, 0.4079),
    "NovaVax": None,
    "AstraZeneca": (-0.2418, -0.2519, -0.2612, -0.2299),
    "Johnson & Johnson": (-0.6433, -0.5797, -0.6086, -0.6081),
}
rows = [CorrelationRow(name, "PostRollout",
                       {} if v is None else dict(zip(("Open", "Close", "High", "Low"), v)))
        for name, v in cells.items()]
table = aggregate_table(rows)
print(render_table(table).decode())

# %% [markdown]
# The Low column mean is exactly -0.10475. Display rounding is half away from
# zero on the decimal value, so it shows as -0.1048.

# %%
table.average_row.cell("Low")

# %%
print(render_table(table, "csv").decode())
