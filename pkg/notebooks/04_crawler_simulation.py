# %% [markdown]
# # Kinematic crawler
#
# A planar two-link arm on a body whose shoulder sits 6 cm above ground.
# When the commanded tip touches the ground it anchors, and returning to
# the rest pose drags the body along.

# %%
from crawlnet import DenormMode, NetworkConfig, TrainingConfig, init_network, train
from crawlnet.crawler import DEFAULT_GEOMETRY, DEFAULT_REST, arm_tip, derive_targets, replay_run, stroke

print("rest tip", arm_tip(DEFAULT_GEOMETRY, *DEFAULT_REST))
targets = derive_targets(DEFAULT_GEOMETRY, DEFAULT_REST, step_deg=1.0)
print("best stroke pose", targets, "stroke",
      round(stroke(DEFAULT_GEOMETRY, *targets.as_tuple(), *DEFAULT_REST), 4), "cm")

# %% [markdown]
# Train a network toward those angles and replay every generation through
# the simulator. Early generations point the arm in the air and the body
# doesn't move; once the tip starts reaching the ground it crawls. The
# servo-2 target sits close to the edge of the output range, where the
# sigmoid is flat, so a looser tolerance keeps this short.

# %%
cfg = TrainingConfig(learning_rate=0.8, tolerance_deg=2.0, denorm_mode=DenormMode.TABLE_AFFINE, seed=1)
run = train(init_network(NetworkConfig(hidden_size=10, seed=1)), cfg, targets)
poses = replay_run(run, DEFAULT_GEOMETRY, DEFAULT_REST)
print("converged", run.converged, "after", run.generations_used, "generations")
moving = next((i + 1 for i, p in enumerate(poses) if p.x > 0), None)
print("first generation with forward motion:", moving)
print("final pose", poses[-1])
for g in (1, 10, 100, run.generations_used):
    r = run.records[g - 1]
    print(f"generation {g:>5}: angles ({r.servo1_deg:8.2f}, {r.servo2_deg:8.2f})  x = {poses[g - 1].x:10.2f} cm")
