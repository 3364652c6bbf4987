import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpdr import InputError, SubspacePair, delta_distance


def test_identical_spans():
    B = np.random.default_rng(0).normal(size=(6, 2))
    assert delta_distance(B, B) == pytest.approx(0, abs=1e-14)
    assert delta_distance(B, 3 * B @ np.array([[1.0, 2], [0, 1]])) == pytest.approx(0, abs=1e-14)


def test_orthogonal_pair():
    assert delta_distance([1.0, 0], [0.0, 1]) == pytest.approx(2.0)


def test_forty_five_degrees():
    assert delta_distance([1.0, 0], np.array([1.0, 1]) / np.sqrt(2)) == pytest.approx(1.0)


def test_unnormalized_true_basis_accepted():
    b = np.r_[1.0, 1, 1, np.zeros(17)]
    assert delta_distance(b, b / np.sqrt(3)) == pytest.approx(0, abs=1e-14)


def test_rank_deficient_rejected():
    with pytest.raises(InputError, match="full rank"):
        delta_distance(np.eye(3)[:, :2], np.array([[1.0, 2], [1, 2], [0, 0]]))


def test_pair_orthonormalizes():
    pair = SubspacePair(np.array([[2.0], [0]]), np.array([[1.0, 1], [0, 1]]))
    np.testing.assert_allclose(pair.B_est.T @ pair.B_est, np.eye(2), atol=1e-10)
    assert delta_distance(pair) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), p=st.integers(2, 8), d=st.integers(1, 3))
def test_rotation_invariance_symmetry_and_bounds(seed, p, d):
    d = min(d, p)
    rng = np.random.default_rng(seed)
    B0, B1 = rng.normal(size=(p, d)), rng.normal(size=(p, d))
    O = np.linalg.qr(rng.normal(size=(d, d)))[0]
    base = delta_distance(B0, B1)
    assert abs(delta_distance(B0, B1 @ O) - base) < 1e-12
    assert abs(delta_distance(B1, B0) - base) < 1e-12
    assert -1e-12 <= base <= 2 + 1e-12
