# %% [markdown]
# # Correlation basics
#
# Pearson coefficients, N/A handling and the colour bands used in reports.

# %%
import random

from eventlens.correlation import classify, pearson, safe_pearson

xs = [1.0, 2.0, 3.0, 4.0, 5.0]
print(pearson(xs, [2.0, 4.1, 5.9, 8.2, 9.9]))   # close to 1
print(pearson(xs, [5.0, 4.0, 3.0, 2.0, 1.0]))   # exactly -1

# %% [markdown]
# A constant column has no variance. `pearson` raises, `safe_pearson` returns None
# and reports print it as N/A. It is never silently 0.

# %%
print(safe_pearson(xs, [7.0] * 5))
print(safe_pearson([1.0, 2.0], [3.0, 4.0]))     # two points are not enough

# %%
for r in (0.7661, 0.3, 0.3001, -0.1349, -0.6433, 0.05):
    band = classify(r)
    print(f"{r:+.4f}  {band.label:<20} {band.color.value}")

# %%
rng = random.Random(1)
noise = [rng.gauss(0, 1) for _ in range(250)]
print(pearson(noise, [2 * v + rng.gauss(0, 1) for v in noise]))
