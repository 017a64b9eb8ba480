import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from framekit.exceptions import DimensionMismatch, NonFinite, NotHermitian, NotPSD
from framekit.instances import gaussian, low_rank
from framekit.numkit import (
    Tolerances,
    as_matrix,
    hermitian_part,
    null_basis,
    numerical_rank,
    opnorm,
    pinv,
    psd_min_eig,
    psd_pinv_sqrt,
    psd_sqrt,
    range_basis,
    range_contains,
    svd,
    sym_eig,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.eye(2), [1, 1]),
        (np.diag([4.0, 1.0]), [1, 4]),
        (np.array([[2.0, 1.0], [1.0, 2.0]]), [1, 3]),
    ],
)
def test_sym_eig_small(M, expected):
    w, V = sym_eig(M)
    np.testing.assert_allclose(w, expected, atol=1e-12)
    np.testing.assert_allclose(V @ np.diag(w) @ V.T, M, atol=1e-12)


def test_sym_eig_matches_characteristic_polynomial(rng, field):
    # Oracle: roots of det(M - x I) computed independently of eigh.
    A = gaussian(rng, (4, 4), field)
    M = A + np.conj(A).T
    roots = np.sort(np.roots(np.poly(M)).real)
    np.testing.assert_allclose(sym_eig(M).eigenvalues, roots, atol=1e-8)


def test_sym_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_sym_eig_rejects_rectangular():
    with pytest.raises(DimensionMismatch):
        sym_eig(np.ones((2, 3)))


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.eye(3), [1, 1, 1]),
        (np.diag([3.0, 0.0]), [3, 0]),
        (np.array([[1.0], [1.0]]), [np.sqrt(2)]),
    ],
)
def test_svd_small(M, expected):
    U, s, V = svd(M)
    np.testing.assert_allclose(s, expected, atol=1e-12)
    np.testing.assert_allclose(U @ np.diag(s) @ V.T, M, atol=1e-12)


def test_pinv_examples(rng):
    np.testing.assert_allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    np.testing.assert_allclose(pinv(np.eye(3)), np.eye(3))
    M = gaussian(rng, (4, 4))
    # Oracle: LU solve against the identity.
    assert opnorm(pinv(M) - np.linalg.solve(M, np.eye(4))) <= 1e-8


def test_pinv_penrose_conditions(rng, field):
    M = low_rank(rng, 5, 2, field, cols=4)
    P = pinv(M)
    H = lambda X: np.conj(X).T  # noqa: E731
    assert opnorm(M @ P @ M - M) < 1e-10
    assert opnorm(P @ M @ P - P) < 1e-10
    assert opnorm(H(M @ P) - M @ P) < 1e-10
    assert opnorm(H(P @ M) - P @ M) < 1e-10


def test_numerical_rank_uses_relative_cutoff():
    tol = Tolerances()
    assert numerical_rank(np.array([1e6, 1e-5])) == 1
    assert numerical_rank(np.array([1e-6, 1e-12])) == 2
    assert numerical_rank(np.array([0.0, 0.0]), tol) == 0
    assert numerical_rank(np.array([])) == 0


def test_range_and_null_bases_are_complementary(rng, field):
    M = low_rank(rng, 6, 3, field)
    R, N = range_basis(M), null_basis(M)
    assert R.shape[1] == 3 and N.shape[1] == 3
    assert opnorm(M @ N) < 1e-10
    Q = np.hstack([R, null_basis(np.conj(M).T)])
    assert opnorm(np.conj(Q).T @ Q - np.eye(6)) < 1e-10


@pytest.mark.parametrize(
    "M, expected", [(np.diag([0.0, 1.0]), 0.0), (np.diag([-1.0, 2.0]), -1.0)]
)
def test_psd_min_eig(M, expected):
    assert psd_min_eig(M) == expected


def test_psd_sqrt_squares_back(rng, field):
    A = low_rank(rng, 5, 3, field)
    M = A @ np.conj(A).T
    R = psd_sqrt(M)
    assert opnorm(R @ R - M) <= 1e-10 * opnorm(M)
    assert opnorm(R - np.conj(R).T) < 1e-12
    # Pseudo-inverse square root: R^+ R is the projection onto R(M).
    P = psd_pinv_sqrt(M) @ R
    assert opnorm(P @ P - P) < 1e-8
    assert np.isclose(np.trace(P).real, 3)


def test_psd_sqrt_clips_roundoff_but_rejects_negative():
    assert np.allclose(psd_sqrt(np.diag([4.0, -1e-14])), np.diag([2.0, 0.0]))
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1e-3]))


@pytest.mark.parametrize(
    "T, S, expected",
    [
        (np.eye(2), np.array([[3.0, 1.0], [2.0, 7.0]]), True),
        (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), False),
        (np.diag([1.0, 0.0]), np.array([[0.5, 0.0], [0.0, 0.0]]), True),
    ],
)
def test_range_contains_examples(T, S, expected):
    assert range_contains(T, S) is expected


def test_range_contains_agrees_with_least_squares(rng, field):
    # Oracle: residual of an lstsq solve of T X = S.
    T = low_rank(rng, 6, 2, field, cols=4)
    for S in (T @ gaussian(rng, (4, 3), field), gaussian(rng, (6, 3), field)):
        X = np.linalg.lstsq(T, S, rcond=None)[0]
        in_range = np.linalg.norm(T @ X - S) < 1e-8 * max(1.0, np.linalg.norm(S))
        assert range_contains(T, S) == in_range


def test_hermitian_part():
    M = np.array([[1.0, 2.0], [0.0, 3.0]])
    np.testing.assert_allclose(hermitian_part(M), [[1.0, 1.0], [1.0, 3.0]])


def test_as_matrix_validation():
    assert as_matrix([1, 2]).shape == (2, 1)
    assert as_matrix(np.eye(2, dtype=int)).dtype == np.float64
    with pytest.raises(NonFinite):
        as_matrix([[np.nan]])
    with pytest.raises(DimensionMismatch):
        as_matrix(np.ones((2, 2, 2)))


@pytest.mark.parametrize("value", [0.0, -1.0, np.inf, np.nan])
def test_tolerances_reject_bad_values(value):
    with pytest.raises(ValueError):
        Tolerances(rank_tol=value)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (4, 3), elements=finite))
def test_pinv_is_least_squares_solution(M):
    b = np.arange(4.0)
    x = pinv(M) @ b
    x_ref = np.linalg.lstsq(M, b, rcond=1e-10)[0]
    assert np.linalg.norm(M @ x - b) <= np.linalg.norm(M @ x_ref - b) + 1e-8 * (1 + np.linalg.norm(b))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (3, 3), elements=finite))
def test_gram_is_psd(A):
    G = A @ A.T
    assert psd_min_eig(G) >= -1e-10 * max(1.0, opnorm(G))
