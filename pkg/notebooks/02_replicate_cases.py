# %% [markdown]
# # Replicating the two published training cases
#
# Case 1: 2 hidden neurons, learning rate 0.8, 1 degree tolerance.
# Case 2: same network, learning rate 0.5, 5 degree tolerance.
# The original initial weights were never published, so a single run can't
# be matched generation for generation; a seed ensemble gives the spread.

# %%
import statistics
from dataclasses import replace

from crawlnet import experiments as ex

case1 = ex.run_case(replace(ex.PRESETS["case1"], base_seed=7))
print(case1.table)

# %%
case2 = ex.run_case(replace(ex.PRESETS["case2"], base_seed=7))
print(case2.table)

# %% [markdown]
# Ensemble of 100 seeds for each case.

# %%
for name in ("case1", "case2"):
    runs = ex.run_case(replace(ex.PRESETS[name], repeats=100)).runs
    gens = [r.generations_used for r in runs if r.converged]
    print(f"{name}: {len(gens)}/100 converged, median {statistics.median(gens):g}, "
          f"range {min(gens)}-{max(gens)}")

# %% [markdown]
# The generation/error series behind a scatter plot of the training run.

# %%
print(ex.plot_csv(case1.runs[0]).splitlines()[:6])

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    recs = case1.runs[0].records
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([r.generation for r in recs], [r.error1_deg for r in recs], s=6, label="servo 1")
    ax.scatter([r.generation for r in recs], [r.error2_deg for r in recs], s=6, label="servo 2")
    ax.set_xlabel("generation")
    ax.set_ylabel("error (deg)")
    ax.legend()
    fig.savefig("case1_errors.png", dpi=100)
    print("wrote case1_errors.png")
except ImportError:
    pass
