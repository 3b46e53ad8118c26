# %% [markdown]
# # Hidden-layer size and learning rate
#
# Paired seeds: every setting sees the same 50 initial networks, so the
# differences come from the hyperparameter alone.

# %%
from dataclasses import replace

from crawlnet import DenormMode
from crawlnet import experiments as ex

template = replace(ex.PRESETS["case1"], denorm_mode=DenormMode.PAPER_STATED, repeats=50)

for r in ex.sweep_hidden([2, 5, 10, 20, 25, 40], template):
    print(f"hidden {r.value:>3}: median {r.median_generations:>6g} generations, "
          f"converged {r.convergence_rate:.0%}")

# %% [markdown]
# Generations fall quickly from 2 to about 20 neurons; past that the
# absolute saving per extra neuron is a handful of generations.
#
# Learning rate: oscillation count is the number of times the servo-1 error
# changes sign, a proxy for stepping past the optimum.

# %%
for r in ex.sweep_lr([0.1, 0.3, 0.5, 0.8, 0.9, 5.0, 50.0], replace(template, max_generations=5000)):
    med = "-" if r.median_generations is None else f"{r.median_generations:g}"
    print(f"lr {r.value:>5}: median {med:>6}, converged {r.convergence_rate:.0%}, "
          f"mean oscillations {r.mean_oscillations:.2f}")

# %% [markdown]
# A decaying schedule: start large, shrink every generation.

# %%
from crawlnet.train import ExponentialDecay

for sched in (None, ExponentialDecay(0.995)):
    spec = template if sched is None else replace(template, lr_schedule=sched)
    (r,) = ex.sweep_lr([0.9], spec)
    print(spec.lr_schedule, f"median {r.median_generations:g}, oscillations {r.mean_oscillations:.2f}")
