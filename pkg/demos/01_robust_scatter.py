"""
Robust scatter under heavy tails
================================

The sample covariance of Cauchy data is useless: it does not converge.
Tyler's scatter only uses directions from the centre, so it recovers the
shape of the elliptical contours whatever the tail.
"""

# %%
import numpy as np
from scipy import stats

from cpdr import TylerConfig, robust_scatter

rng = np.random.default_rng(0)
shape = np.diag([1.6, 0.4])  # already trace 2
X = stats.multivariate_t(shape=shape, df=1).rvs(size=2000, random_state=rng)

# %%
# The sample covariance, rescaled to the same trace, is dominated by a few
# extreme points.
C = np.cov(X.T)
print("sample covariance (trace 2):\n", np.round(2 * C / np.trace(C), 3))

# %%
est = robust_scatter(X)
print("Tyler scatter:\n", np.round(est.sigma_hat, 3))
print("iterations:", est.iterations_used, "residual:", f"{est.final_residual:.1e}")

# %%
# Iterating the location as well changes little for symmetric data.
est_it = robust_scatter(X, TylerConfig(location_mode="iterate"))
print("median location:", np.round(est.mu_hat, 3), " iterated:", np.round(est_it.mu_hat, 3))
