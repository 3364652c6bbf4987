"""Response slicing for inverse regression."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import InputError


@dataclass(frozen=True)
class SliceAssignment:
    """Slice labels in ``1..K`` for each observation.

    ``boundaries`` holds the ``K - 1`` cut values for quantile slicing; a
    response equal to a cut value belongs to the lower slice. It is empty
    when each distinct response value forms its own slice.
    """

    labels: np.ndarray
    K: int
    counts: np.ndarray
    boundaries: np.ndarray

    @property
    def proportions(self) -> np.ndarray:
        return self.counts / self.counts.sum()


def slice_response(y, H: int = 5) -> SliceAssignment:
    """Discretize ``y`` into at most ``H`` slices.

    A response with at most ``H`` distinct values is sliced by value.
    Otherwise slices hold (nearly) equal counts: sorted ``y`` is cut after
    ranks ``floor(n k / H)``, tied responses never straddle a cut, and
    slices emptied by ties are merged away.
    """
    y = np.asarray(y, dtype=float).ravel()
    n = y.shape[0]
    if H < 2:
        raise InputError("need at least two slices")
    if n < H:
        raise InputError(f"cannot form {H} slices from {n} observations")
    if not np.all(np.isfinite(y)):
        raise InputError("y contains non-finite entries")
    values = np.unique(y)
    if values.size == 1:
        raise InputError("response has a single value")

    if values.size <= H:
        labels = np.searchsorted(values, y) + 1
        boundaries = np.empty(0)
    else:
        y_sorted = np.sort(y, kind="stable")
        ranks = (n * np.arange(1, H)) // H
        cuts = np.unique(y_sorted[ranks - 1])
        boundaries = cuts[cuts < y_sorted[-1]]
        # searchsorted(side="left") counts cuts strictly below y: ties go low
        labels = np.searchsorted(boundaries, y, side="left") + 1
    K = int(labels.max())
    counts = np.bincount(labels, minlength=K + 1)[1:]
    return SliceAssignment(labels=labels, K=K, counts=counts, boundaries=boundaries)
