"""End-to-end fitting: scatter, projection, slicing, kernel, subspace."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import InputError
from .kernels import (
    CP_METHODS,
    METHODS,
    KernelMatrix,
    kernel_classical,
    kernel_cp_dr,
    kernel_cp_save,
    kernel_cp_sir,
    sample_whitening,
    slice_moments,
)
from .projection import project
from .scatter import ScatterEstimate, TylerConfig, robust_scatter, validate_data
from .slicing import SliceAssignment, slice_response
from .subspace import DEFAULT_DMAX, SubspaceEstimate, back_transform, merc, top_eigen

_CP_KERNELS = {"cp_sir": kernel_cp_sir, "cp_save": kernel_cp_save, "cp_dr": kernel_cp_dr}


def normalize_method(method: str) -> str:
    """Accept ``cp-dr`` / ``CP_DR`` style spellings."""
    name = method.strip().lower().replace("-", "_")
    if name not in METHODS:
        raise InputError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return name


@dataclass(frozen=True)
class FitResult:
    method: str
    slices: SliceAssignment
    kernel: KernelMatrix
    subspace: SubspaceEstimate
    d_merc: int
    center: np.ndarray
    whitening: np.ndarray
    contour: bool
    scatter: ScatterEstimate | None = None

    @property
    def d(self) -> int:
        return self.subspace.d

    def transform(self, X) -> np.ndarray:
        """Whitened (and, for CP methods, contour-projected) predictors."""
        Z = (np.asarray(X, dtype=float) - self.center) @ self.whitening
        if self.contour:
            Z = Z / np.linalg.norm(Z, axis=1)[:, None]
        return Z

    def indices(self, X) -> np.ndarray:
        """Per-sample reduced predictors ``basis_proj' z_i``."""
        return self.transform(X) @ self.subspace.basis_proj


def fit_directions(
    X,
    y,
    method: str = "cp_dr",
    n_slices: int = 5,
    dim: int | str = "auto",
    d_max: int = DEFAULT_DMAX,
    tyler: TylerConfig | None = None,
) -> FitResult:
    """Estimate a dimension-reduction basis for the regression of ``y`` on ``X``.

    ``dim="auto"`` uses the MERC choice; an integer fixes the dimension.
    The MERC choice is always reported in ``d_merc``. ``d_max`` is capped at
    ``p - 1``.
    """
    method = normalize_method(method)
    X, y = validate_data(X, y)
    p = X.shape[1]
    slices = slice_response(y, n_slices)
    if method in CP_METHODS:
        scatter = robust_scatter(X, tyler)
        proj = project(X, scatter)
        kernel = _CP_KERNELS[method](slice_moments(proj, slices))
        center, whitening, contour = scatter.mu_hat, scatter.sigma_inv_sqrt, True
    else:
        scatter = None
        kernel = kernel_classical(X, slices, method)
        center, whitening = sample_whitening(X)
        contour = False

    full = top_eigen(kernel, 1)
    d_merc = merc(full.eigenvalues, min(d_max, p - 1))
    d = d_merc if dim == "auto" else int(dim)
    sub = back_transform(top_eigen(kernel, d), whitening)
    return FitResult(method, slices, kernel, sub, d_merc, center, whitening, contour, scatter)

