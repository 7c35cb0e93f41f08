# %% [markdown]
# # Scatter plots on fixed axes
#
# Pre and post rollout plots reuse the full-window axes, so point clouds can be
# compared by eye.

# %%
from eventlens.model import CompanySeries, WindowLabel, merge_on_dates, split_by_event
from eventlens.report import axes_fragment, company_plots, render_scatter
from eventlens.synthetic import PROFILES, generate_company

profile = PROFILES[0]
bars, trends = generate_company(profile, seed=0)
series = CompanySeries(profile.company, profile.ticker, merge_on_dates(bars, trends))
event = profile.event
pre, post = split_by_event(series, event)
plots = company_plots(series, [(WindowLabel.FULL, series), (WindowLabel.PRE, pre),
                               (WindowLabel.POST, post)])
[(p.window.value, len(p.points), p.axes.y_max) for p in plots]

# %%
svgs = [render_scatter(p) for p in plots]
len({axes_fragment(s) for s in svgs})   # 1: identical axis geometry

# %%
# write one out to look at
with open("moderna_post.svg", "wb") as fh:
    fh.write(svgs[2])
