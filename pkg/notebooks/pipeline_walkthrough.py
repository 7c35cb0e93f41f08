# %% [markdown]
# # Ingest and analyze the bundled fixture
#
# The package ships five synthetic companies (prices, trends, config) so the whole
# pipeline runs offline. This walks through the same steps `eventlens run` takes.

# %%
import tempfile
from pathlib import Path

from eventlens import cli
from eventlens.config import bundled_config_path, load_config

config = load_config(bundled_config_path())
out = Path(tempfile.mkdtemp()) / "out"
[(s.company, s.ticker, config.events.get(s.company)) for s in config.sources]

# %%
cli.cmd_ingest(config, out)
sorted(p.name for p in out.glob("MRNA_*"))

# %% [markdown]
# `analyze` only reads the merged snapshots, so it can be rerun without touching
# the sources.

# %%
summary, controls_ok = cli.analyze(config, out)
print(controls_ok)
print((out / "report_PostRollout.md").read_text())

# %%
for c in summary["control_checks"][:3]:
    print(c["company"], c["window"], c["records"], c["max_deviation"])
