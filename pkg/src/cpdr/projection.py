"""Contour projection: whitening followed by radial normalization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import DegenerateSampleError
from .scatter import ScatterEstimate, robust_scatter, validate_data


@dataclass(frozen=True)
class ProjectedSample:
    X_proj: np.ndarray
    radii: np.ndarray
    scatter: ScatterEstimate

    @property
    def n(self) -> int:
        return self.X_proj.shape[0]

    @property
    def p(self) -> int:
        return self.X_proj.shape[1]


def project(X, est: ScatterEstimate) -> ProjectedSample:
    """Map each row to ``S^{-1/2}(x - mu) / ||x - mu||_S``.

    ``||v||_S`` is the Mahalanobis norm ``sqrt(v' S^{-1} v)``, which equals
    the Euclidean norm of the whitened vector, so rows land exactly on the
    unit sphere.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != est.p:
        raise ValueError(f"X must have shape (n, {est.p})")
    Z = (X - est.mu_hat) @ est.sigma_inv_sqrt
    radii = np.linalg.norm(Z, axis=1)
    scale = np.max(np.abs(X - est.mu_hat), axis=0)
    scale[scale == 0] = 1.0
    if np.any(np.linalg.norm((X - est.mu_hat) / scale, axis=1) < 1e-12):
        raise DegenerateSampleError("cannot project the center point")
    return ProjectedSample(Z / radii[:, None], radii, est)


def mahalanobis_norm(X, est: ScatterEstimate) -> np.ndarray:
    """Row-wise ``sqrt((x - mu)' S^{-1} (x - mu))`` via a linear solve."""
    D = np.atleast_2d(np.asarray(X, dtype=float)) - est.mu_hat
    return np.sqrt(np.einsum("ij,ij->i", D, np.linalg.solve(est.sigma_hat, D.T).T))


def project_direct(X, est: ScatterEstimate) -> np.ndarray:
    """Same map as :func:`project`, evaluated term by term from its definition."""
    D = np.atleast_2d(np.asarray(X, dtype=float)) - est.mu_hat
    return (D @ est.sigma_inv_sqrt) / mahalanobis_norm(X, est)[:, None]


def fit_project(X, cfg=None) -> ProjectedSample:
    X = validate_data(X)
    return project(X, robust_scatter(X, cfg))
