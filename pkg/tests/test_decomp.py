import numpy as np
import pytest
from conftest import crandn, random_complex_orthogonal, random_symplectic, random_unitary_symplectic
from hypothesis import given, settings
from hypothesis import strategies as st

from realforms import matcore as mc
from realforms.decomp import (
    antiorthogonal_reduce,
    antisymplectic_reduce,
    hilbert90,
    polar_in_group,
    reduce_to_Kpq,
    symplectic_eig,
)
from realforms.errors import ContractError
from realforms.grouprep import GroupKind, validate_membership


def test_polar_examples(rng):
    U, H = polar_in_group(2 * np.eye(3), GroupKind("GL", 3))
    assert np.allclose(U, np.eye(3)) and np.allclose(H, 2 * np.eye(3))
    W = np.linalg.qr(crandn(rng, 3, 3))[0]
    U, H = polar_in_group(W, GroupKind("GL", 3))
    assert np.allclose(U, W) and np.allclose(H, np.eye(3))
    M = np.diag([2, 0.5])
    U, H = polar_in_group(M, GroupKind("Sp", 2))
    assert np.allclose(U, np.eye(2)) and np.allclose(H, M)
    assert validate_membership(H, GroupKind("Sp", 2)).passed


def test_polar_stays_in_group(rng):
    for kind, M in [
        (GroupKind("Sp", 4), random_symplectic(rng, 2)),
        (GroupKind("SO", 3), random_complex_orthogonal(rng, 3)),
        (GroupKind("O", 4), random_complex_orthogonal(rng, 4) @ np.diag([1, 1, 1, -1])),
    ]:
        U, H = polar_in_group(M, kind)
        assert np.allclose(U @ H, M)
        assert validate_membership(U, kind).passed and validate_membership(H, kind).passed
        assert np.all(np.linalg.eigvalsh(H) > 0)
        U2, H2 = polar_in_group(M, kind)
        assert np.max(np.abs(U - U2)) <= 1e-12 and np.max(np.abs(H - H2)) <= 1e-12


def test_polar_rejects_non_member():
    with pytest.raises(ContractError):
        polar_in_group(np.diag([2.0, 3.0]), GroupKind("Sp", 2))
    with pytest.raises(ContractError):
        polar_in_group(np.zeros((2, 2)), GroupKind("GL", 2))


def test_symplectic_eig_examples(rng):
    V, D = symplectic_eig(np.eye(4))
    assert np.allclose(V @ D @ V.conj().T, np.eye(4))
    V, D = symplectic_eig(np.diag([2, 0.5]))
    assert np.allclose(V, np.eye(2)) and np.allclose(D, np.diag([2, 0.5]))
    V0 = random_unitary_symplectic(rng, 1)
    H = V0 @ np.diag([3, 1 / 3]) @ V0.conj().T
    V, D = symplectic_eig(H)
    assert sorted(D.diagonal().real) == pytest.approx([1 / 3, 3])
    with pytest.raises(ContractError):
        symplectic_eig(np.diag([2.0, 3.0]))


def test_symplectic_eig_spectrum_closed(rng):
    V0 = random_unitary_symplectic(rng, 3)
    lam = np.array([2.0, -0.5, 1.0])
    H = V0 @ np.diag(np.r_[lam, 1 / lam]) @ V0.conj().T
    V, D = symplectic_eig(H)
    d = np.sort(D.diagonal().real)
    assert np.allclose(np.sort(1 / d), d)
    assert np.allclose(V.T @ mc.J(3) @ V, mc.J(3), atol=1e-10)


def test_reduce_to_kpq_examples(rng):
    S, sig = reduce_to_Kpq(mc.Kpq(2, 1))
    assert sig == (4, 2)
    assert np.allclose(S.conj().T @ mc.Kpq(2, 1) @ S, mc.Kpq(2, 1))
    S, sig = reduce_to_Kpq(np.diag([4, 0.25]))
    assert sig == (2, 0)
    assert np.allclose(S, np.diag([0.5, 2]))
    P = random_symplectic(rng, 2)
    S, sig = reduce_to_Kpq(P.conj().T @ P)
    assert sig == (4, 0)


def test_antisymplectic_examples(rng):
    S = antisymplectic_reduce(np.diag([3, -1 / 3]))
    assert np.allclose(S, np.diag([3**-0.5, 3**0.5]))
    assert np.allclose(antisymplectic_reduce(mc.Ipq(1, 1)), np.eye(2))
    H = 1j * mc.J(2)
    S = antisymplectic_reduce(H)
    assert np.allclose(S.conj().T @ H @ S, mc.Ipq(2, 2))
    assert np.allclose(S.T @ mc.J(2) @ S, mc.J(2))
    with pytest.raises(ContractError):
        antisymplectic_reduce(mc.Kpq(1, 0))


def test_antisymplectic_spectrum(rng):
    S = random_symplectic(rng, 2)
    H = S.conj().T @ (1j * mc.J(2)) @ S
    d = np.linalg.eigvalsh(H)
    assert np.allclose(np.sort(-1 / d), d)


def test_antiorthogonal_examples(rng):
    H = 1j * mc.J(2)
    M = antiorthogonal_reduce(H)
    assert np.allclose(M.conj().T @ H @ M, H) and np.allclose(M.T @ M, np.eye(4))
    H = np.array([[0, 1j], [-1j, 0]])
    M = antiorthogonal_reduce(H)
    assert np.allclose(M.conj().T @ H @ M, 1j * mc.J(1))
    assert np.allclose(M.T @ M, np.eye(2))
    R = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    H = R.T @ (1j * mc.J(2)) @ R
    M = antiorthogonal_reduce(H)
    assert np.allclose(M.conj().T @ H @ M, 1j * mc.J(2))
    with pytest.raises(ContractError):
        antiorthogonal_reduce(np.eye(2))


def test_hilbert90_examples():
    Q, _ = hilbert90(np.eye(3))
    assert np.allclose(Q, np.eye(3))
    Q, _ = hilbert90(np.array([[-1.0]]))
    assert np.allclose(Q, [[2j]])
    H = np.array([[0.0, 1.0], [1.0, 0.0]])
    Q, _ = hilbert90(H)
    assert np.allclose(Q, (1 - 1j) * H + (1 + 1j) * np.eye(2))
    assert np.linalg.det(Q) == pytest.approx(4j)
    assert np.allclose(np.linalg.inv(Q.conj()) @ Q, H)
    with pytest.raises(ContractError):
        hilbert90(2 * np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_hilbert90_identity(n, p, seed):
    rng = np.random.default_rng(seed)
    p = min(p, n)
    M = random_complex_orthogonal(rng, n)
    H = M.conj().T @ mc.Ipq(p, n - p) @ M
    Q, cond = hilbert90(H)
    assert cond < 1e8
    assert mc.fro(Q.conj() @ H - Q) <= 1e-9 * mc.fro(Q)
