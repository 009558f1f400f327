# %% [markdown]
# Barron function: error versus width
#
# Sampled networks on a 5-D Barron function. The relative L2 test error
# should fall roughly like width**-0.5. Pass --full for 10 000 points and
# three seeds; the default is a smaller run that finishes in seconds.

# %%
import sys

import numpy as np

from swimnet.benchmark import BarronSpec, run_barron

full = "--full" in sys.argv
spec = BarronSpec(dim=5, train_points=10_000 if full else 3000, test_points=10_000 if full else 3000,
                  widths=(64, 256, 1024), seeds=(0, 1, 2) if full else (0,))

# %%
rows = run_barron(spec)
for method in spec.methods:
    errs = [np.mean([r.value for r in rows if r.method == method and r.width == w]) for w in spec.widths]
    slope = np.polyfit(np.log(spec.widths), np.log(errs), 1)[0]
    print(f"{method:16s}", "  ".join(f"N={w}: {e:.4f}" for w, e in zip(spec.widths, errs)), f" slope={slope:.2f}")

# %% [markdown]
# At depth one both methods converge; random features can even win at large
# widths on this smooth target. The gap opens with depth, see
# depth_comparison.py.
