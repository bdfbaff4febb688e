import itertools

import numpy as np
import pytest
from conftest import crandn
from hypothesis import given, settings
from hypothesis import strategies as st

from realforms import matcore as mc
from realforms.errors import ContractError, DegenerateFormError, IndeterminateError, ParameterError


def test_special_matrices():
    assert np.array_equal(mc.J(1), [[0, 1], [-1, 0]])
    assert np.array_equal(mc.Ipq(1, 1), np.diag([1, -1]))
    assert np.array_equal(mc.Dpq(2, 1), np.diag([1, 1, 1j]))
    assert np.array_equal(mc.special_matrix("Identity", n=3), np.eye(3))
    assert np.array_equal(mc.special_matrix("Kpq", p=1, q=1), mc.Kpq(1, 1))


def test_special_matrix_relations():
    for p, q in [(2, 1), (1, 3), (0, 2)]:
        D, I = mc.Dpq(p, q), mc.Ipq(p, q)
        assert np.allclose(D.T @ I @ D, np.eye(p + q))
        K = mc.Kpq(p, q)
        n = p + q
        assert np.allclose(K.T @ mc.J(n) @ K, mc.J(n))
        assert np.allclose(K @ K, np.eye(2 * n))


def test_special_matrix_errors():
    with pytest.raises(ParameterError):
        mc.special_matrix("Ipq", n=4, p=1, q=1)
    with pytest.raises(ParameterError):
        mc.special_matrix("Bogus", n=2)
    with pytest.raises(ParameterError):
        mc.Ipq(0, 0)


def test_hermitian_eig_examples():
    U, d = mc.hermitian_eig(np.eye(2))
    assert np.allclose(d, [1, 1])
    assert np.allclose(U, np.eye(2))
    U, d = mc.hermitian_eig(np.diag([-1.0, 3.0]))
    assert np.allclose(d, [3, -1])
    assert np.allclose(np.abs(U), [[0, 1], [1, 0]])
    _, d = mc.hermitian_eig(1j * mc.J(1))
    assert np.allclose(d, [1, -1])


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ContractError):
        mc.hermitian_eig(np.array([[1, 2], [0, 1]]))


def test_hermitian_eig_reconstruction_sweep(rng):
    for k in range(1000):
        n = 1 + k % 8
        A = crandn(rng, n, n)
        H = (A + A.conj().T) / 2
        U, d = mc.hermitian_eig(H)
        assert np.all(np.diff(d) <= 0)
        assert mc.fro(U @ np.diag(d) @ U.conj().T - H) <= mc.DEFAULT_TOL.bound(mc.fro(H))
        assert mc.fro(U.conj().T @ U - np.eye(n)) <= 1e-12 * n


def test_signature_examples():
    assert mc.signature(np.diag([1.0, -1.0])) == (1, 1)
    assert mc.signature(1j * mc.J(3)) == (3, 3)
    assert mc.signature(np.diag([3.0, 2.0, -5.0])) == (2, 1)
    with pytest.raises(DegenerateFormError):
        mc.signature(np.diag([1.0, 1e-15]))


def test_sylvester_law(rng):
    for k in range(50):
        n = 1 + k % 5
        d = rng.choice([-1.0, 1.0], n) * rng.uniform(0.5, 2, n)
        S = crandn(rng, n, n) + 2 * np.eye(n)
        assert mc.signature(S.conj().T @ np.diag(d) @ S) == mc.signature(np.diag(d))


def test_pfaffian_examples():
    b = 2.5 - 1j
    assert mc.pfaffian(np.array([[0, b], [-b, 0]])) == pytest.approx(b)
    assert mc.pfaffian(mc.J(1)) == pytest.approx(1)
    with pytest.raises(ContractError):
        mc.pfaffian(np.zeros((3, 3)))
    with pytest.raises(ContractError):
        mc.pfaffian(np.eye(2))


def _pf_4x4(A):
    return A[0, 1] * A[2, 3] - A[0, 2] * A[1, 3] + A[0, 3] * A[1, 2]


def test_pfaffian_4x4_closed_form(rng):
    for _ in range(20):
        X = crandn(rng, 4, 4)
        A = X - X.T
        pf = mc.pfaffian(A)
        assert pf == pytest.approx(_pf_4x4(A), rel=1e-12)
        assert pf**2 == pytest.approx(np.linalg.det(A), rel=1e-10)


def test_pfaffian_frozen_value():
    # integer skew matrix: Pf = 1*6 - 2*5 + 3*4 = 8, det = 64
    A = np.zeros((4, 4))
    for (i, j), v in zip(itertools.combinations(range(4), 2), [1, 2, 3, 4, 5, 6]):
        A[i, j], A[j, i] = v, -v
    assert mc.pfaffian(A) == pytest.approx(8)


def test_pfaffian_congruence(rng):
    for n in (1, 2, 3):
        for _ in range(20):
            X = crandn(rng, 2 * n, 2 * n)
            A = X - X.T
            P = crandn(rng, 2 * n, 2 * n)
            lhs = mc.pfaffian(P.T @ A @ P)
            rhs = np.linalg.det(P) * mc.pfaffian(A)
            assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


def test_sylvester_real_examples():
    R, sig = mc.sylvester_real(mc.Ipq(2, 1))
    assert sig == (2, 1)
    assert np.allclose(R, np.eye(3))
    R, sig = mc.sylvester_real(np.diag([4.0, -9.0]))
    assert sig == (1, 1)
    assert np.allclose(np.abs(R), np.diag([2, 3]))
    R, sig = mc.sylvester_real(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert sig == (1, 1)
    assert np.allclose(R.T @ mc.Ipq(1, 1) @ R, [[0, 1], [1, 0]])
    with pytest.raises(ContractError):
        mc.sylvester_real(np.diag([1.0, 1j]))
    with pytest.raises(DegenerateFormError):
        mc.sylvester_real(np.diag([1.0, 0.0]))


def test_numerical_rank_guard_band():
    tol = mc.DEFAULT_TOL
    assert mc.numerical_rank(np.array([1.0, 0.5, 1e-16]), tol) == 2
    with pytest.raises(IndeterminateError):
        mc.numerical_rank(np.array([1.0, 2e-9]), tol)
    assert mc.numerical_rank(np.array([1.0, 2e-9]), tol, guard=False) in (1, 2)


def test_null_space():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    N = mc.null_space(A)
    assert N.shape == (3, 1)
    assert np.allclose(A @ N, 0)


def test_tolerance_validation():
    with pytest.raises(ParameterError):
        mc.Tolerance(rel=-1.0)
    tol = mc.Tolerance(rel=1e-6, abs=1e-12)
    assert tol.ok(1e-7, 1.0)
    assert not tol.ok(1e-5, 1.0)
    assert tol.scaled(10).rel == pytest.approx(1e-5)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=64, max_size=64),
)
def test_pfaffian_squares_to_det(n, vals):
    X = np.array(vals[: 4 * n * n]).reshape(2 * n, 2 * n)
    A = X - X.T
    pf = mc.pfaffian(A)
    det = np.linalg.det(A)
    assert abs(pf**2 - det) <= 1e-9 * (1 + abs(det) + np.linalg.norm(A) ** (2 * n))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.1, 10), min_size=1, max_size=6), st.lists(st.booleans(), min_size=6, max_size=6))
def test_signature_counts_signs(mags, signs):
    d = np.array([m if s else -m for m, s in zip(mags, signs)])
    sig = mc.signature(np.diag(d))
    assert sig == (int(np.sum(d > 0)), int(np.sum(d < 0)))
