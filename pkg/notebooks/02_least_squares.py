# %% [markdown]
# # Gene weights by least squares
#
# The linear head of a multi-gene model is fitted with a minimum-norm
# solve, so duplicated or constant genes never break the fit.

# %%
import numpy as np

from mggp.fitting import design_matrix, least_squares, r_squared, rmse

x = np.linspace(0, 1, 20)
A = design_matrix([x, x, np.zeros_like(x)])
y = 0.3 + 2.0 * x
w = least_squares(A, y)
print("bias", w.w0, "weights", w.w)

# %%
# The duplicated column shares the slope equally; the zero column gets
# nothing. Compare with numpy's pseudo-inverse:
print(np.linalg.pinv(A) @ y)

# %%
yhat = A @ w.as_array()
print("rmse", rmse(y, yhat), "r2", r_squared(y, yhat))
