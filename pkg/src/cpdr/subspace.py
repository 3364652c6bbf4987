"""Eigen-extraction, back-transformation and MERC dimension selection."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._errors import InputError, NumericalError
from .kernels import KernelMatrix
from .scatter import ScatterEstimate

DEFAULT_DMAX = 5
MERC_FLOOR = 1e-12


@dataclass(frozen=True)
class SubspaceEstimate:
    eigenvalues: np.ndarray
    basis_proj: np.ndarray
    d: int
    basis_x: np.ndarray | None = None


def top_eigen(M, d: int) -> SubspaceEstimate:
    """Leading ``d`` eigenvectors of a symmetric kernel.

    Eigenvalues come back in descending order with negatives clamped to
    zero. Each eigenvector is signed so that its largest-magnitude entry is
    positive (lowest index on ties), which makes the output reproducible
    without affecting spans.
    """
    M = M.M if isinstance(M, KernelMatrix) else np.asarray(M, dtype=float)
    p = M.shape[0]
    if not 1 <= d <= p:
        raise InputError(f"dimension d={d} outside 1..{p}")
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    order = np.argsort(-w, kind="stable")
    w, V = np.clip(w[order], 0.0, None), V[:, order]
    B = _fix_signs(V[:, :d])
    return SubspaceEstimate(eigenvalues=w, basis_proj=B, d=d)


def back_transform(est: SubspaceEstimate, scatter) -> SubspaceEstimate:
    """Express projected-coordinate directions in raw predictor coordinates.

    A direction ``v`` acting on whitened data scores ``v' W (x - mu)``, so
    the raw direction is ``W v`` with ``W`` the whitening matrix. Columns are
    re-orthonormalized by QR with a positive diagonal in ``R``.
    """
    W = scatter.sigma_inv_sqrt if isinstance(scatter, ScatterEstimate) else np.asarray(scatter)
    return replace(est, basis_x=orthonormalize(W @ est.basis_proj))


def merc(eigenvalues, d_max: int = DEFAULT_DMAX) -> int:
    """Maximal eigenvalue ratio criterion.

    Returns the smallest ``j`` in ``1..d_max`` maximizing
    ``lambda_j / lambda_{j+1}``; denominators are floored at
    ``1e-12 * lambda_1``.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if not 1 <= d_max <= lam.size - 1:
        raise InputError(f"d_max={d_max} must lie in 1..{lam.size - 1}")
    if np.any(lam < 0) or np.any(np.diff(lam) > 0):
        raise InputError("eigenvalues must be nonnegative and nonincreasing")
    if lam[0] <= 0:
        raise NumericalError("kernel matrix is null")
    floor = MERC_FLOOR * lam[0]
    ratios = lam[:d_max] / np.maximum(lam[1 : d_max + 1], floor)
    return int(np.argmax(ratios)) + 1


def orthonormalize(B) -> np.ndarray:
    Q, R = np.linalg.qr(np.asarray(B, dtype=float))
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs


def _fix_signs(V):
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs
