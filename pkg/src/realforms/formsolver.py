"""Invariant bilinear and Hermitian forms of a representation, and scalar normalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .errors import ContractError, DegenerateFormError, ParameterError
from .grouprep import Representation
from .matcore import DEFAULT_TOL

__all__ = [
    "ORTHOGONAL_I",
    "SYMPLECTIC_J",
    "FormSpace",
    "hermitian_basis",
    "invariant_bilinear_space",
    "invariant_hermitian",
    "invariant_hermitian_space",
    "normalize_lambda",
]

SYMPLECTIC_J = "symplectic_J"
ORTHOGONAL_I = "orthogonal_I"


@dataclass
class FormSpace:
    kind: str
    basis: list

    @property
    def dimension(self):
        return len(self.basis)


def _linear_operators(rep, conj):
    # rho^T B rho = B  <=>  rho^T B - B rho^-1 = 0 (better scaled than the quadratic form);
    # the Hermitian case uses rho^* in place of rho^T.
    n = rep.n
    I = np.eye(n)
    blocks = []
    for g in rep.generators:
        gi = np.linalg.inv(g)
        left = g.conj().T if conj else g.T
        # row-major vec: vec(L B) = (L kron I) vec B ; vec(B R) = (I kron R^T) vec B
        op = np.kron(left, I) - np.kron(I, gi.T)
        blocks.append(op / (np.linalg.norm(g) + np.linalg.norm(gi)))
    return np.vstack(blocks)


def invariant_bilinear_space(rep: Representation, tol=DEFAULT_TOL) -> FormSpace:
    """Basis of ``{B : rho(g)^T B rho(g) = B for all g}`` (Frobenius-orthonormal)."""
    n = rep.n
    N = mc.null_space(_linear_operators(rep, conj=False), tol, what="bilinear form operator")
    return FormSpace("bilinear", [N[:, k].reshape(n, n) for k in range(N.shape[1])])


def hermitian_basis(n):
    """Frobenius-orthonormal real basis of ``n x n`` Hermitian matrices, as ``n^2 x n^2`` columns."""
    cols = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n), dtype=complex)
            if i == j:
                E[i, i] = 1
                cols.append(E.ravel())
                continue
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            cols.append(E.ravel())
            F = np.zeros((n, n), dtype=complex)
            F[i, j], F[j, i] = 1j / np.sqrt(2), -1j / np.sqrt(2)
            cols.append(F.ravel())
    return np.array(cols).T


def invariant_hermitian_space(rep: Representation, tol=DEFAULT_TOL) -> FormSpace:
    """Real basis of invariant Hermitian forms ``rho(g)^* H rho(g) = H``."""
    n = rep.n
    E = hermitian_basis(n)
    op = _linear_operators(rep, conj=True) @ E
    real_op = np.vstack([op.real, op.imag])
    N = mc.null_space(real_op, tol, what="Hermitian form operator")
    basis = []
    for k in range(N.shape[1]):
        H = (E @ N[:, k]).reshape(n, n)
        basis.append(_sign_convention((H + H.conj().T) / 2))
    return FormSpace("hermitian", basis)


def _sign_convention(H):
    t = np.trace(H).real
    if abs(t) <= 1e-8 * np.linalg.norm(H):
        flat = H.real.ravel()
        t = flat[int(np.argmax(np.abs(flat)))]
    return -H if t < 0 else H


def _is_nondegenerate(H, tol):
    try:
        mc.signature(H, tol)
    except DegenerateFormError:
        return False
    return True


def invariant_hermitian(rep: Representation, tol=DEFAULT_TOL, seed=0):
    """A nondegenerate invariant Hermitian form of unit Frobenius norm, or ``None``.

    When the solution space has real dimension above one, a seeded random real
    combination is used.  Raises :class:`DegenerateFormError` when only degenerate
    solutions were found.
    """
    space = invariant_hermitian_space(rep, tol)
    if not space.basis:
        return None
    if len(space.basis) == 1:
        H = space.basis[0]
        if not _is_nondegenerate(H, tol):
            raise DegenerateFormError("the only invariant Hermitian form is degenerate")
        return H
    rng = np.random.default_rng(seed)
    for _ in range(5):
        c = rng.standard_normal(len(space.basis))
        H = sum(ci * Bi for ci, Bi in zip(c, space.basis))
        H = _sign_convention(H / np.linalg.norm(H))
        if _is_nondegenerate(H, tol):
            return H
    raise DegenerateFormError("every sampled invariant Hermitian form is degenerate")


def normalize_lambda(H, relation, tol=DEFAULT_TOL):
    """Rescale ``H`` by a positive real so the quadratic relation holds with sign +-1.

    ``relation="symplectic_J"`` fits ``H^T J H = mu J`` and ``"orthogonal_I"`` fits
    ``H^T H = mu I``.  Returns ``(|mu|^(-1/2) H, sign(mu))``.  The fitted ``mu`` has
    the same sign as the scalar of the inverse relation ``H^-T J H^-1 = lambda J``.
    """
    H = mc.as_matrix(H, "H")
    n = H.shape[0]
    if relation == SYMPLECTIC_J:
        if n % 2:
            raise ParameterError("symplectic relation needs even size")
        R = mc.J(n // 2)
    elif relation == ORTHOGONAL_I:
        R = np.eye(n, dtype=complex)
    else:
        raise ParameterError(f"unknown relation {relation!r}")
    lhs = H.T @ R @ H
    mu = np.vdot(R, lhs) / np.vdot(R, R)
    scale2 = np.linalg.norm(H) ** 2
    if abs(mu) <= tol.bound(scale2) / np.linalg.norm(R):
        raise ContractError("the fitted scalar vanishes; H does not satisfy the relation")
    if abs(mu.imag) > tol.bound(abs(mu)):
        raise ContractError(f"fitted scalar {mu:.6g} is not real")
    resid = np.linalg.norm(lhs - mu * R)
    if not tol.ok(resid, scale2):
        raise ContractError(f"H does not satisfy the relation up to a scalar (residual {resid:.3e})")
    sign = 1 if mu.real > 0 else -1
    return H / np.sqrt(abs(mu)), sign
