"""Location and Tyler scatter estimation for elliptical predictors.

The scatter is identified only up to scale, so every estimate here is
normalized to ``trace == p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import linalg

from ._errors import (
    ConvergenceError,
    DegenerateSampleError,
    InputError,
    SingularScatterError,
)

DEGENERATE_RTOL = 1e-12
SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class TylerConfig:
    tol: float = 1e-8
    max_iter: int = 500
    location_mode: Literal["fixed_median", "iterate"] = "fixed_median"

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("tol must be positive")
        if self.max_iter < 1:
            raise InputError("max_iter must be at least 1")
        if self.location_mode not in ("fixed_median", "iterate"):
            raise InputError(f"unknown location_mode {self.location_mode!r}")


@dataclass(frozen=True)
class ScatterEstimate:
    """Location, trace-normalized scatter and its symmetric inverse root."""

    mu_hat: np.ndarray
    sigma_hat: np.ndarray
    sigma_inv_sqrt: np.ndarray
    iterations_used: int = 0
    final_residual: float = 0.0
    location_mode: str = field(default="fixed_median")

    @property
    def p(self) -> int:
        return self.mu_hat.shape[0]

    @classmethod
    def from_moments(cls, mu_hat, sigma_hat) -> "ScatterEstimate":
        """Wrap a known location/scatter pair (rescaled to trace p)."""
        mu_hat = np.asarray(mu_hat, dtype=float)
        sigma_hat = _normalize_trace(_symmetrize(np.asarray(sigma_hat, dtype=float)))
        return cls(mu_hat, sigma_hat, symmetric_inverse_sqrt(sigma_hat))


def validate_data(X, y=None):
    """Check the shape and finiteness contract of a predictor matrix.

    Returns ``X`` (and ``y`` when given) as float arrays.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InputError("X must be a 2-d array of shape (n, p)")
    n, p = X.shape
    if p < 2:
        raise InputError("need at least two predictors")
    if n < p + 1:
        raise InputError(f"need n >= p + 1 samples, got n={n}, p={p}")
    if not np.all(np.isfinite(X)):
        raise InputError("X contains non-finite entries")
    if y is None:
        return X
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != n:
        raise InputError(f"y has length {y.shape[0]}, expected {n}")
    if not np.all(np.isfinite(y)):
        raise InputError("y contains non-finite entries")
    return X, y


def coordinatewise_median(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] == 0:
        raise InputError("no samples")
    return np.median(X, axis=0)


def symmetric_inverse_sqrt(S) -> np.ndarray:
    """Return the symmetric positive-definite ``T`` with ``T @ S @ T == I``."""
    S = _symmetrize(np.asarray(S, dtype=float))
    w, V = np.linalg.eigh(S)
    if w[0] <= SINGULAR_RTOL * max(w[-1], 0.0) or w[-1] <= 0:
        raise SingularScatterError("scatter numerically singular")
    return _symmetrize((V / np.sqrt(w)) @ V.T)


def tyler_scatter(X, mu_hat=None, cfg: TylerConfig | None = None, sigma0=None) -> ScatterEstimate:
    """Tyler's distribution-free scatter by fixed-point iteration.

    Parameters
    ----------
    X : array of shape (n, p)
    mu_hat : array of shape (p,), optional
        Starting location. Defaults to the coordinatewise median. With
        ``location_mode="fixed_median"`` it is held fixed throughout.
    cfg : TylerConfig, optional
    sigma0 : array of shape (p, p), optional
        Starting scatter, identity by default. The fixed point does not
        depend on it.

    Returns
    -------
    ScatterEstimate
        ``final_residual`` is the relative Frobenius distance between the
        returned scatter and one more application of the update, which is
        also the stopping statistic.
    """
    cfg = cfg or TylerConfig()
    X = validate_data(X)
    n, p = X.shape
    mu = coordinatewise_median(X) if mu_hat is None else np.asarray(mu_hat, dtype=float).copy()
    if mu.shape != (p,):
        raise InputError(f"mu_hat must have shape ({p},)")
    col_scale = np.max(np.abs(X - mu), axis=0)
    col_scale[col_scale == 0] = 1.0

    S = np.eye(p) if sigma0 is None else _normalize_trace(_symmetrize(np.asarray(sigma0, dtype=float)))
    iterate_mu = cfg.location_mode == "iterate"
    residual = np.inf
    for it in range(1, cfg.max_iter + 1):
        D = X - mu
        _check_degenerate(D, col_scale)
        R = _tyler_update(D, S)
        residual = np.linalg.norm(S - R) / np.linalg.norm(S)
        mu_step = 0.0
        if iterate_mu:
            r = np.sqrt(_mahalanobis_sq(D, R))
            mu_new = (X / r[:, None]).sum(axis=0) / (1.0 / r).sum()
            mu_step = np.linalg.norm((mu_new - mu) / col_scale)
        if residual < cfg.tol and mu_step < cfg.tol:
            return ScatterEstimate(
                mu_hat=mu,
                sigma_hat=S,
                sigma_inv_sqrt=symmetric_inverse_sqrt(S),
                iterations_used=it - 1,
                final_residual=float(residual),
                location_mode=cfg.location_mode,
            )
        S = R
        if iterate_mu:
            mu = mu_new
    raise ConvergenceError(
        f"Tyler iteration did not converge in {cfg.max_iter} iterations "
        f"(residual {residual:.3e})",
        sigma=S,
        mu=mu,
        residual=float(residual),
        iterations=cfg.max_iter,
    )


def robust_scatter(X, cfg: TylerConfig | None = None) -> ScatterEstimate:
    """Coordinatewise median followed by Tyler's scatter."""
    X = validate_data(X)
    return tyler_scatter(X, coordinatewise_median(X), cfg)


def tyler_residual(X, est: ScatterEstimate) -> float:
    """Relative Frobenius residual of the fixed-point equation at ``est``."""
    X = np.asarray(X, dtype=float)
    R = _tyler_update(X - est.mu_hat, est.sigma_hat)
    return float(np.linalg.norm(est.sigma_hat - R) / np.linalg.norm(est.sigma_hat))


def _tyler_update(D, S):
    r2 = _mahalanobis_sq(D, S)
    R = (D / r2[:, None]).T @ D
    return _normalize_trace(_symmetrize(R))


def _mahalanobis_sq(D, S):
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise SingularScatterError("scatter numerically singular") from exc
    Z = linalg.solve_triangular(L, D.T, lower=True)
    return np.einsum("ij,ij->j", Z, Z)


def _check_degenerate(D, col_scale):
    dist = np.linalg.norm(D / col_scale, axis=1)
    bad = np.flatnonzero(dist < DEGENERATE_RTOL)
    if bad.size:
        raise DegenerateSampleError(
            f"degenerate sample at location estimate (row {int(bad[0])})"
        )


def _symmetrize(A):
    return 0.5 * (A + A.T)


def _normalize_trace(S):
    return S * (S.shape[0] / np.trace(S))
