# %% [markdown]
# Deeper networks: sampled versus random hidden layers
#
# Three hidden layers of 512 neurons on the same 5-D Barron data. Random
# features stack poorly (each layer is a random sine of the last), while
# sampled layers stay adapted to the target.

# %%
from swimnet.benchmark import BarronSpec, run_barron

spec = BarronSpec(dim=5, train_points=5000, test_points=5000, widths=(512,), depths=(1, 2, 3), seeds=(0,))
rows = run_barron(spec)

# %%
print("depth  swim      random_features")
for depth in spec.depths:
    got = {r.method: r.value for r in rows if r.depth == depth}
    print(f"{depth:5d}  {got['swim']:.5f}  {got['random_features']:.5f}")
