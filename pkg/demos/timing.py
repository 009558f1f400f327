# %% [markdown]
# Fit time versus training-set size
#
# With the architecture fixed, sampling and the readout solve are linear in
# the number of training points. Doubling M should roughly double the time.

# %%
from swimnet.benchmark import timing_scaling

report = timing_scaling([200], [2000, 4000, 8000, 16000], repeats=3)
for m, t in zip(report.sizes, report.medians):
    print(f"M={m:6d}  median {t:.3f} s")
print(f"log-log slope {report.slope:.2f}; ratios", ", ".join(f"{r:.2f}" for r in report.ratios))
