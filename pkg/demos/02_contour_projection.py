"""
Contour projection
==================

Each observation is whitened with the robust scatter and pushed onto the
unit sphere. All moments of the projected predictors exist, and under an
elliptical law their covariance is ``I/p``.
"""

# %%
import numpy as np
from scipy import stats

from cpdr import project, robust_scatter

rng = np.random.default_rng(1)
p = 5
X = stats.multivariate_t(shape=np.eye(p), df=1).rvs(size=50_000, random_state=rng)
proj = project(X, robust_scatter(X))

# %%
print("row norms in", proj.X_proj.shape, "->", np.ptp(np.linalg.norm(proj.X_proj, axis=1)))
print("cov of projected rows * p:\n", np.round(p * np.cov(proj.X_proj.T), 3))

# %%
# The radii carry everything the projection throws away.
print("radius quantiles:", np.round(np.quantile(proj.radii, [0.1, 0.5, 0.9, 0.999]), 2))
