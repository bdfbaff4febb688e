"""Structured factorizations used by the conjugation constructions.

* polar decomposition that stays inside the classical group of its argument,
* unitary-symplectic diagonalization of Hermitian symplectic matrices,
* congruence normal forms for Hermitian matrices with ``H^T J H = +-J`` or
  ``H^T H = -I``,
* a scalar Hilbert 90 splitting ``H = conj(Q)^-1 Q``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import matcore as mc
from .errors import ConditioningError, ContractError, PairingError
from .grouprep import GroupKind, validate_membership
from .matcore import DEFAULT_TOL

__all__ = [
    "H90_COND_LIMIT",
    "PolarPair",
    "antiorthogonal_reduce",
    "antisymplectic_reduce",
    "hilbert90",
    "polar_in_group",
    "reduce_to_Kpq",
    "symplectic_eig",
]

H90_COND_LIMIT = 1e8


class PolarPair(NamedTuple):
    U: np.ndarray
    H: np.ndarray


def _require(cond, exc, msg):
    if not cond:
        raise exc(msg)


def _check_hermitian(H, tol):
    err = mc.fro(H - H.conj().T)
    _require(tol.ok(err, mc.fro(H)), ContractError, f"input is not Hermitian (residual {err:.3e})")


def polar_in_group(M, kind: GroupKind, tol=DEFAULT_TOL) -> PolarPair:
    """``M = U H`` with ``U`` unitary and ``H`` positive definite, both checked in ``kind``.

    The factors come from one SVD ``M = X S Y*``: ``U = X Y*`` and ``H = Y S Y*``.
    """
    M = mc.as_matrix(M, "M")
    X, s, Yh = np.linalg.svd(M)
    _require(s[-1] > tol.abs * max(s[0], 1.0) and s[-1] > 0, ContractError, "M is singular")
    U = X @ Yh
    H = (Yh.conj().T * s) @ Yh
    H = (H + H.conj().T) / 2
    loose = tol.scaled(10)
    for name, F in (("unitary", U), ("positive", H)):
        rep = validate_membership(F, kind, loose)
        if not rep.passed:
            raise ContractError(f"{name} polar factor is not in {kind}; is M in the group?")
    return PolarPair(U, H)


def _quaternionic_pick(vecs, values, partner, count):
    """Greedy selection of ``count`` columns spanning a partner-isotropic subspace.

    ``partner`` maps a vector to its paired vector (antilinear).  Candidates are the
    columns of ``vecs``; at each step the candidate with the largest ``log|value|``
    among those keeping at least half their norm after projection is taken.
    """
    dim = vecs.shape[0]
    chosen = []
    basis = np.zeros((dim, 0), dtype=complex)
    key = np.log(np.abs(values))
    for _ in range(count):
        resid_list = []
        for k in range(vecs.shape[1]):
            v = vecs[:, k] - basis @ (basis.conj().T @ vecs[:, k])
            r = np.linalg.norm(v)
            resid_list.append((k, v, r))
        good = [t for t in resid_list if t[2] >= 0.5]
        if good:
            k, v, r = max(good, key=lambda t: (key[t[0]], -t[0]))
        else:
            k, v, r = max(resid_list, key=lambda t: t[2])
        if r < 1e-6:
            raise PairingError("could not complete an isotropic eigenvector basis")
        w = v / r
        chosen.append(w)
        pw = partner(w)
        basis = np.linalg.qr(np.column_stack([basis, w, pw]))[0]
    return np.column_stack(chosen)


def symplectic_eig(H, tol=DEFAULT_TOL):
    """``H = V D V*`` with ``V`` unitary symplectic and ``D = diag(L, L^-1)`` real.

    Eigenvectors are paired through ``v -> J conj(v)``, which maps the eigenvalue
    ``l`` to ``1/l``; self-paired eigenspaces (``l = +-1``) are split by a greedy
    Gram-Schmidt that keeps the chosen vectors orthogonal to their partners.
    """
    H = mc.as_matrix(H, "H")
    dim = H.shape[0]
    _require(dim % 2 == 0, ContractError, "symplectic_eig needs even size")
    n = dim // 2
    _check_hermitian(H, tol)
    Jn = mc.J(n)
    scale2 = max(mc.fro(H) ** 2, 1.0)
    err = mc.fro(H.T @ Jn @ H - Jn)
    _require(tol.ok(err, scale2), ContractError, f"H is not symplectic (residual {err:.3e})")
    d, U = np.linalg.eigh((H + H.conj().T) / 2)
    if np.any(np.abs(d) == 0):
        raise PairingError("zero eigenvalue in a symplectic matrix")
    # reciprocal closure of the spectrum
    srt = np.sort(d)
    if np.max(np.abs(np.sort(1 / d) - srt)) > 1e-6 * np.abs(srt).max():
        raise PairingError("eigenvalues are not closed under reciprocals")
    W = _quaternionic_pick(U, d, lambda w: Jn @ w.conj(), n)
    V = np.column_stack([W, -Jn @ W.conj()])
    lam = np.real(np.einsum("ij,ij->j", W.conj(), H @ W))
    D = np.diag(np.r_[lam, 1 / lam]).astype(complex)
    rec = mc.fro(H - V @ D @ V.conj().T)
    if not tol.scaled(10).ok(rec, mc.fro(H)):
        raise PairingError(f"symplectic eigendecomposition failed to reconstruct H (residual {rec:.3e})")
    return V, D


def reduce_to_Kpq(H, tol=DEFAULT_TOL):
    """Symplectic ``S`` with ``S* H S = K_{p,q}``; returns ``(S, Signature(2p, 2q))``."""
    V, D = symplectic_eig(H, tol)
    n = V.shape[0] // 2
    lam = D.diagonal()[:n].real
    order = np.argsort(lam < 0, kind="stable")  # positives first
    B = np.diag(np.abs(lam) ** -0.5)[:, order]
    C = np.block([[B, np.zeros_like(B)], [np.zeros_like(B), np.linalg.inv(B).T]])
    S = V @ C
    p = int(np.sum(lam > 0))
    return S, mc.Signature(2 * p, 2 * (n - p))


def antisymplectic_reduce(H, tol=DEFAULT_TOL):
    """Symplectic ``S`` with ``S* H S = I_{n,n}`` for Hermitian ``H`` with ``H^T J H = -J``.

    Eigenvectors of the positive eigenvalues ``L`` are completed by ``-J conj(v)``
    (eigenvalue ``-1/l``), then rescaled by ``diag(L^-1/2, L^1/2)``.
    """
    H = mc.as_matrix(H, "H")
    dim = H.shape[0]
    _require(dim % 2 == 0, ContractError, "antisymplectic_reduce needs even size")
    n = dim // 2
    _check_hermitian(H, tol)
    Jn = mc.J(n)
    err = mc.fro(H.T @ Jn @ H + Jn)
    _require(tol.ok(err, max(mc.fro(H) ** 2, 1.0)), ContractError, f"H^T J H != -J (residual {err:.3e})")
    sig = mc.signature(H, tol)
    _require(sig == (n, n), ContractError, f"signature must be ({n},{n}), got {tuple(sig)}")
    U, d = mc.hermitian_eig(H, tol)
    W = U[:, :n]
    lam = d[:n]
    V = np.column_stack([W, -Jn @ W.conj()])
    s = np.r_[lam**-0.5, lam**0.5]
    return V * s


def _anti_stage1(H, n):
    U, d = mc.hermitian_eig(H)
    W = U[:, :n]
    lam = d[:n]
    V = np.column_stack([W, W.conj()])
    return V * np.r_[lam**-0.5, lam**0.5]


def antiorthogonal_reduce(H, tol=DEFAULT_TOL):
    """Complex orthogonal ``M`` with ``M* H M = i J`` for Hermitian ``H`` with ``H^T H = -I``.

    Both ``H`` and ``iJ`` are first brought to ``I_{n,n}`` by matrices ``A`` and ``B``
    with ``A^T A = B^T B = [[0, I], [I, 0]]``; then ``M = A B^-1``.
    """
    H = mc.as_matrix(H, "H")
    dim = H.shape[0]
    _require(dim % 2 == 0, ContractError, "antiorthogonal_reduce needs even size")
    n = dim // 2
    _check_hermitian(H, tol)
    err = mc.fro(H.T @ H + np.eye(dim))
    _require(tol.ok(err, max(mc.fro(H) ** 2, 1.0)), ContractError, f"H^T H != -I (residual {err:.3e})")
    sig = mc.signature(H, tol)
    _require(sig == (n, n), ContractError, f"signature must be ({n},{n}), got {tuple(sig)}")
    A = _anti_stage1(H, n)
    B = _anti_stage1(1j * mc.J(n), n)
    return A @ np.linalg.inv(B)


def hilbert90(H, tol=DEFAULT_TOL, seed=0, hermitian=True):
    """Invertible ``Q`` with ``conj(Q) H = Q``, i.e. ``H = conj(Q)^-1 Q``.

    Uses ``Q = conj(c) H + c I``, which satisfies the identity for every scalar ``c``
    as soon as ``conj(H) H = I``.  The scalars ``1/2, i, 1+i`` are tried first, then
    seeded random unit scalars; the first ``Q`` with condition number below
    :data:`H90_COND_LIMIT` is returned together with that condition number.
    ``hermitian=False`` skips the Hermitian check for callers that only need the
    relation ``conj(H) H = I``.
    """
    H = mc.as_matrix(H, "H")
    n = H.shape[0]
    if hermitian:
        _check_hermitian(H, tol)
    err = mc.fro(H.conj() @ H - np.eye(n))
    _require(tol.ok(err, max(mc.fro(H) ** 2, 1.0)), ContractError, f"conj(H) H != I (residual {err:.3e})")
    rng = np.random.default_rng(seed)
    fixed = [0.5, 1j, 1 + 1j]
    for k in range(len(fixed) + 20):
        c = fixed[k] if k < len(fixed) else np.exp(2j * np.pi * rng.random())
        Q = np.conj(c) * H + c * np.eye(n)
        cond = np.linalg.cond(Q)
        if cond < H90_COND_LIMIT:
            return Q, float(cond)
    raise ConditioningError("every scalar choice produced an ill-conditioned Q")
