# %% [markdown]
# # Classical regression baselines
#
# Four polynomial families fitted on the whole dataset. Each one contains
# the previous span, so training RMSE can only go down.

# %%
from mggp import dataio
from mggp.baselines import BaselineKind, baseline_report, fit_baseline

data = dataio.bundled_synthetic()
for row in baseline_report(data):
    print(f"{row['model']:15s} rmse={row['rmse']:.4f} r2={row['r2']:.3f}")

# %%
model, _ = fit_baseline(data, BaselineKind.LINEAR)
for name, coef in model.describe(data.feature_names):
    print(f"{name:10s} {coef:+.5f}")
