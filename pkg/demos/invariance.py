# %% [markdown]
# Rigid-body invariance
#
# Scale, rotate and shift the inputs. If the same training pairs are reused,
# the first hidden layer of the moved network computes exactly the same
# features, and the pair-sampling distribution is unchanged.

# %%
import numpy as np

from swimnet.benchmark import RigidTransform
from swimnet.network import forward_hidden
from swimnet.sampler import FitConfig, build_pool, fit

rng = np.random.default_rng(0)
X = rng.uniform(-1, 1, size=(300, 3))
y = np.sin(4 * X[:, 0]) * X[:, 2]
H = RigidTransform.random(3, rng, scale=2.0)
print("scale", H.a, "\nrotation\n", np.round(H.A, 3), "\nshift", np.round(H.c, 3))

# %%
cfg = FitConfig(layers=[100], activation="tanh")
net = fit(X, y, cfg)
moved = fit(H(X), y, cfg, pairs=net.pair_indices)
probe = rng.uniform(-1, 1, size=(1000, 3))
gap = np.abs(forward_hidden(net, probe, 1) - forward_hidden(moved, H(probe), 1)).max()
print(f"max first-layer difference: {gap:.2e}")

# %%
p = build_pool(X, y, X, 1, 100, cfg, np.random.default_rng(1))
q = build_pool(H(X), y, H(X), 1, 100, cfg, np.random.default_rng(1))
print(f"max pool probability difference: {np.abs(p.probabilities() - q.probabilities()).max():.2e}")
