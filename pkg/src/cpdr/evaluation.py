"""Projection-matrix distance between subspaces."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import InputError

RANK_RTOL = 1e-10


def orthonormal_basis(B) -> np.ndarray:
    """Orthonormal basis for the column span of ``B``; rejects rank deficiency."""
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    if s.size == 0 or s[-1] <= RANK_RTOL * s[0]:
        raise InputError("basis not full rank")
    return U


def projection_matrix(B) -> np.ndarray:
    U = orthonormal_basis(B)
    return U @ U.T


@dataclass(frozen=True)
class SubspacePair:
    """True and estimated bases, orthonormalized on construction."""

    B_true: np.ndarray
    B_est: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "B_true", orthonormal_basis(self.B_true))
        object.__setattr__(self, "B_est", orthonormal_basis(self.B_est))
        if self.B_true.shape[0] != self.B_est.shape[0]:
            raise InputError("bases live in different dimensions")


def delta_distance(B_true, B_est=None) -> float:
    """``tr((P_true - P_est)^2) / d_true``.

    Zero iff the spans coincide; at most 2 when both bases have the same
    dimension. Accepts a :class:`SubspacePair` or two raw bases.
    """
    pair = B_true if isinstance(B_true, SubspacePair) else SubspacePair(B_true, B_est)
    P0 = pair.B_true @ pair.B_true.T
    P1 = pair.B_est @ pair.B_est.T
    diff = P0 - P1
    return float(max(np.sum(diff * diff), 0.0) / pair.B_true.shape[1])
