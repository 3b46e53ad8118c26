# %% [markdown]
# # The 1-H-2 network and its gradient
#
# One input neuron, a variable hidden layer, two sigmoid outputs that become
# servo angles. This walks through a forward pass, the angle mapping, and a
# finite-difference check of the backprop gradient.

# %%
import numpy as np

from crawlnet import (
    DenormMode,
    NetworkConfig,
    backprop_update,
    denormalize,
    feedforward,
    finite_diff_gradient,
    init_network,
)

net = init_network(NetworkConfig(hidden_size=2, seed=42))
print("w_ih", net.w_ih.ravel(), "\nw_ho", net.w_ho, "\nb_h", net.b_h, "\nb_o", net.b_o)

# %% [markdown]
# The input value is arbitrary; the network has to produce the same two
# angles whatever it is fed.

# %%
trace = feedforward(net, 0.37)
print("outputs", trace.output)
for mode in DenormMode:
    print(mode.value, [round(denormalize(float(o), mode), 3) for o in trace.output])

# %% [markdown]
# Backprop against central differences, every parameter.

# %%
targets = np.array([0.75, 5 / 6])  # (90, 120) degrees under the affine mapping
updated, grad = backprop_update(net, 0.37, targets, lr=0.8)
fd = finite_diff_gradient(net, 0.37, targets, h=1e-6)
print("analytic  ", np.round(grad, 8))
print("numerical ", np.round(fd, 8))
print("max |diff|", np.abs(grad - fd).max())
