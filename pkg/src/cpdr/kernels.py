"""Slice moments and inverse-regression kernel matrices.

Contour-projected kernels (``cp_sir``, ``cp_save``, ``cp_dr``) work on unit
vectors and replace the constant-variance level of the classical methods by
a per-slice level ``tau_k``, estimated by the median eigenvalue of the
slice second-moment matrix. The classical baselines (``sir``, ``save``,
``dr``) standardize with the ordinary sample mean and covariance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import InputError, NumericalError, SingularScatterError
from .projection import ProjectedSample
from .slicing import SliceAssignment

CP_METHODS = ("cp_sir", "cp_save", "cp_dr")
CLASSICAL_METHODS = ("sir", "save", "dr")
METHODS = CP_METHODS + CLASSICAL_METHODS


@dataclass(frozen=True)
class SliceMoments:
    """Per-slice plug-in moments.

    Attributes
    ----------
    p_hat : (K,) slice proportions
    m_hat : (K, p) slice means
    S_hat : (K, p, p) raw (uncentered) slice second moments
    tau_hat : (K,) median eigenvalue of each ``S_hat[k]``
    """

    p_hat: np.ndarray
    m_hat: np.ndarray
    S_hat: np.ndarray
    tau_hat: np.ndarray

    @property
    def K(self) -> int:
        return self.p_hat.shape[0]

    @property
    def p(self) -> int:
        return self.m_hat.shape[1]

    @classmethod
    def from_arrays(cls, p_hat, m_hat, S_hat, tau_hat=None) -> "SliceMoments":
        S_hat = np.asarray(S_hat, dtype=float)
        if tau_hat is None:
            tau_hat = np.array([median_eigenvalue(S) for S in S_hat])
        return cls(
            np.asarray(p_hat, dtype=float),
            np.asarray(m_hat, dtype=float),
            S_hat,
            np.asarray(tau_hat, dtype=float),
        )


@dataclass(frozen=True)
class KernelMatrix:
    M: np.ndarray
    method: str


def median_eigenvalue(S) -> float:
    """Median of the eigenvalues of a symmetric matrix (mean of the middle
    two for even dimension)."""
    return float(np.median(np.linalg.eigvalsh(S)))


def slice_moments(proj, slices: SliceAssignment) -> SliceMoments:
    """Slice proportions, means, second moments and median-eigenvalue levels.

    ``proj`` is a :class:`ProjectedSample` or a plain ``(n, p)`` array.
    """
    Z = proj.X_proj if isinstance(proj, ProjectedSample) else np.asarray(proj, dtype=float)
    labels = np.asarray(slices.labels)
    if labels.shape[0] != Z.shape[0]:
        raise InputError("slice labels and samples differ in length")
    if np.any(slices.counts < 2):
        raise NumericalError("slice too small")
    n, p = Z.shape
    onehot = (labels[:, None] == np.arange(1, slices.K + 1)).astype(float)
    counts = onehot.sum(axis=0)
    m_hat = (onehot.T @ Z) / counts[:, None]
    S_hat = np.einsum("ik,ij,il->kjl", onehot, Z, Z) / counts[:, None, None]
    S_hat = 0.5 * (S_hat + S_hat.transpose(0, 2, 1))
    tau_hat = np.median(np.linalg.eigvalsh(S_hat), axis=1)
    return SliceMoments(counts / n, m_hat, S_hat, tau_hat)


def kernel_cp_sir(m: SliceMoments) -> KernelMatrix:
    M = np.einsum("k,ki,kj->ij", m.p_hat, m.m_hat, m.m_hat)
    return KernelMatrix(_sym(M), "cp_sir")


def kernel_cp_save(m: SliceMoments) -> KernelMatrix:
    H = m.tau_hat[:, None, None] * np.eye(m.p) - m.S_hat
    M = np.einsum("k,kij,kjl->il", m.p_hat, H, H)
    return KernelMatrix(_sym(M), "cp_save")


def kernel_cp_dr(m: SliceMoments) -> KernelMatrix:
    """Directional-regression kernel in its closed single-sum form.

    ``2 [E tau^2 I + E S^2 + M_sir^2 + E||m||^2 M_sir - 2 E tau S]`` with
    every expectation taken over slices.
    """
    w = m.p_hat
    I = np.eye(m.p)
    M_sir = kernel_cp_sir(m).M
    M = (
        (w @ m.tau_hat**2) * I
        + np.einsum("k,kij,kjl->il", w, m.S_hat, m.S_hat)
        + M_sir @ M_sir
        + (w @ np.einsum("ki,ki->k", m.m_hat, m.m_hat)) * M_sir
        - 2.0 * np.einsum("k,kij->ij", w * m.tau_hat, m.S_hat)
    )
    return KernelMatrix(_sym(2.0 * M), "cp_dr")


def kernel_dr_pairwise(m: SliceMoments) -> KernelMatrix:
    """Directional-regression kernel as the double sum over slice pairs.

    ``sum_kl p_k p_l [(tau_k + tau_l) I - A_kl]^2`` with
    ``A_kl = S_k + S_l - m_k m_l' - m_l m_k'``.
    """
    return KernelMatrix(_pairwise_dr(m.p_hat, m.m_hat, m.S_hat, m.tau_hat), "cp_dr")


def dr_closed_form_gap(m: SliceMoments) -> np.ndarray:
    """Exact finite-sample difference ``pairwise - closed form``.

    The closed form drops terms that vanish once the slice moments average
    to their population values (mean zero, second moment ``I/p``, mean
    level ``1/p``). With ``H_k = tau_k I - S_k``, ``G = sum_k p_k H_k``,
    ``mbar = sum_k p_k m_k`` and
    ``C = sum_k p_k H_k (m_k mbar' + mbar m_k')`` the gap is
    ``2 G^2 + 2 (C + C')``.
    """
    w, mm, S, tau = m.p_hat, m.m_hat, m.S_hat, m.tau_hat
    I = np.eye(m.p)
    H = tau[:, None, None] * I - S
    G = np.einsum("k,kij->ij", w, H)
    mbar = w @ mm
    Hm = np.einsum("k,kij,kj->i", w, H, mm)
    C = np.outer(Hm, mbar) + np.einsum("k,kij,j,kl->il", w, H, mbar, mm)
    return _sym(2.0 * G @ G + 2.0 * (C + C.T))


def kernel_classical(X, slices: SliceAssignment, method: str) -> KernelMatrix:
    """Classical SIR / SAVE / DR kernel on sample-standardized predictors."""
    if method not in CLASSICAL_METHODS:
        raise InputError(f"unknown classical method {method!r}")
    Z = standardize(X)
    if np.any(slices.counts < 2):
        raise NumericalError("slice too small")
    labels = np.asarray(slices.labels)
    onehot = (labels[:, None] == np.arange(1, slices.K + 1)).astype(float)
    counts = onehot.sum(axis=0)
    w = counts / Z.shape[0]
    means = (onehot.T @ Z) / counts[:, None]
    second = np.einsum("ik,ij,il->kjl", onehot, Z, Z) / counts[:, None, None]
    I = np.eye(Z.shape[1])
    if method == "sir":
        M = np.einsum("k,ki,kj->ij", w, means, means)
    elif method == "save":
        C = second - np.einsum("ki,kj->kij", means, means)
        H = I - C
        M = np.einsum("k,kij,kjl->il", w, H, H)
    else:
        M = _pairwise_dr(w, means, second, np.ones_like(w))
    return KernelMatrix(_sym(M), method)


def sample_whitening(X):
    """Sample mean and symmetric inverse root of the (1/n) sample covariance."""
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    D = X - mean
    C = D.T @ D / X.shape[0]
    w, V = np.linalg.eigh(0.5 * (C + C.T))
    if w[0] <= 1e-12 * max(w[-1], 0.0) or w[-1] <= 0:
        raise SingularScatterError("sample covariance is singular")
    return mean, (V / np.sqrt(w)) @ V.T


def standardize(X) -> np.ndarray:
    mean, W = sample_whitening(X)
    return (np.asarray(X, dtype=float) - mean) @ W


def _pairwise_dr(w, means, second, tau):
    # sum_kl w_k w_l D_kl^2, D_kl = (tau_k + tau_l) I - A_kl
    K, p = means.shape
    I = np.eye(p)
    M = np.zeros((p, p))
    for k in range(K):
        for l in range(K):
            A = second[k] + second[l] - np.outer(means[k], means[l]) - np.outer(means[l], means[k])
            D = (tau[k] + tau[l]) * I - A
            M += w[k] * w[l] * (D @ D)
    return _sym(M)


def _sym(M):
    return 0.5 * (M + M.T)
