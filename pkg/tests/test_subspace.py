import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpdr import InputError, NumericalError, ScatterEstimate, back_transform, merc, top_eigen
from cpdr.evaluation import projection_matrix


def test_top_eigen_diagonal():
    est = top_eigen(np.diag([3.0, 2.0, 1.0]), 2)
    np.testing.assert_allclose(est.eigenvalues, [3, 2, 1])
    np.testing.assert_allclose(est.basis_proj, np.eye(3)[:, :2], atol=1e-15)


def test_top_eigen_degenerate_spectrum_returns_e1():
    est = top_eigen(np.eye(4), 1)
    np.testing.assert_allclose(est.basis_proj[:, 0], [1, 0, 0, 0], atol=1e-15)


def test_top_eigen_residual_and_sign(rng):
    A = rng.normal(size=(6, 6))
    M = A @ A.T
    est = top_eigen(M, 3)
    lam = est.eigenvalues[:3]
    np.testing.assert_allclose(M @ est.basis_proj, est.basis_proj * lam, atol=1e-9)
    np.testing.assert_allclose(est.basis_proj.T @ est.basis_proj, np.eye(3), atol=1e-10)
    assert np.all(np.diff(est.eigenvalues) <= 0)
    for col in est.basis_proj.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_top_eigen_clamps_negative_and_checks_d():
    est = top_eigen(np.diag([1.0, -1e-14]), 1)
    assert est.eigenvalues[1] == 0.0
    with pytest.raises(InputError):
        top_eigen(np.eye(3), 4)


def test_back_transform_identity_and_axis():
    est = top_eigen(np.diag([3.0, 2.0, 1.0]), 2)
    out = back_transform(est, ScatterEstimate.from_moments(np.zeros(3), np.eye(3)))
    np.testing.assert_allclose(out.basis_x, est.basis_proj, atol=1e-15)
    est2 = top_eigen(np.diag([2.0, 1.0]), 1)
    out2 = back_transform(est2, ScatterEstimate.from_moments(np.zeros(2), np.diag([4.0, 1.0])))
    np.testing.assert_allclose(out2.basis_x[:, 0], [1, 0], atol=1e-15)


def test_back_transform_span(rng):
    A = rng.normal(size=(5, 5))
    sc = ScatterEstimate.from_moments(np.zeros(5), A @ A.T + np.eye(5))
    B = rng.normal(size=(5, 5))
    est = back_transform(top_eigen(B @ B.T, 2), sc)
    target = sc.sigma_inv_sqrt @ est.basis_proj
    P = projection_matrix(target)
    np.testing.assert_allclose(P @ est.basis_x, est.basis_x, atol=1e-10)
    np.testing.assert_allclose(est.basis_x.T @ est.basis_x, np.eye(2), atol=1e-10)


def test_merc_designed_gap():
    assert merc([10, 5, 0.1, 0.05, 0.04, 0.03], 5) == 2


def test_merc_tie_rule():
    assert merc(np.ones(6), 5) == 1


def test_merc_floor_on_exact_zeros():
    # zeros after the leading pair: the floored ratio at j=2 dominates
    assert merc([4.0, 2.0, 0, 0, 0, 0], 5) == 2


def test_merc_errors():
    with pytest.raises(NumericalError, match="null"):
        merc(np.zeros(6), 5)
    with pytest.raises(InputError):
        merc([3.0, 2.0, 1.0], 3)
    with pytest.raises(InputError):
        merc([1.0, 2.0, 3.0], 2)


@settings(max_examples=50, deadline=None)
@given(
    lam=st.lists(st.floats(1e-3, 1e3), min_size=3, max_size=10).map(lambda v: sorted(v, reverse=True)),
    c=st.floats(1e-3, 1e3),
)
def test_merc_scale_invariance(lam, c):
    lam = np.array(lam)
    d_max = len(lam) - 1
    assert merc(c * lam, d_max) == merc(lam, d_max)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_merc_exact_rank(r, rng):
    V = np.linalg.qr(rng.normal(size=(8, 8)))[0]
    M = sum(np.outer(V[:, j], V[:, j]) * (1 + j) for j in range(r))
    assert merc(top_eigen(M, 1).eigenvalues, 5) == r
