# %% [markdown]
# Stratified cross-validation on synthetic blobs
#
# The same routine backs ``swimnet bench-classify`` for CSV files. Labels can
# be any strings; folds keep the class proportions.

# %%
import numpy as np

from swimnet.benchmark import run_classification
from swimnet.sampler import FitConfig

rng = np.random.default_rng(1)
centers = {"setosa-ish": (-4, 0), "versicolor-ish": (0, 3), "virginica-ish": (4, 0)}
X = np.vstack([rng.normal(c, 1.2, size=(120, 2)) for c in centers.values()])
labels = np.repeat(list(centers), 120)

# %%
report = run_classification(X, labels, folds=10, depths=(1, 2, 3), width=200, cfg=FitConfig(layers=[200]))
for depth, acc in report.mean_accuracy.items():
    print(f"depth {depth}: mean accuracy {acc:.4f}")
print("best depth:", report.best_depth)
