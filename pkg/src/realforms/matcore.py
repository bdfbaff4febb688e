"""Dense complex matrix helpers: special matrices, spectra, signatures, Pfaffians.

Every routine takes an explicit :class:`Tolerance`.  Residual checks compare a raw
Frobenius norm against ``tol.rel * scale + tol.abs`` where ``scale`` is the natural
size of the quantity being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    ContractError,
    DegenerateFormError,
    IndeterminateError,
    ParameterError,
    UnsupportedSizeError,
)

__all__ = [
    "DEFAULT_TOL",
    "Dpq",
    "Ipq",
    "J",
    "Kpq",
    "Signature",
    "Tolerance",
    "as_matrix",
    "fro",
    "hermitian_eig",
    "identity",
    "null_space",
    "numerical_rank",
    "pfaffian",
    "signature",
    "special_matrix",
    "sylvester_real",
]


@dataclass(frozen=True)
class Tolerance:
    """Residual policy: ``|r| <= rel * scale + abs``."""

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not self.rel > 0:
            raise ParameterError(f"tolerance rel must be positive, got {self.rel}")
        if not self.abs >= 0:
            raise ParameterError(f"tolerance abs must be non-negative, got {self.abs}")

    def bound(self, scale=1.0):
        return self.rel * float(scale) + self.abs

    def ok(self, residual, scale=1.0):
        return float(residual) <= self.bound(scale)

    def scaled(self, factor):
        return Tolerance(self.rel * factor, self.abs * factor)


DEFAULT_TOL = Tolerance()


class Signature(NamedTuple):
    p: int
    q: int

    def swapped(self):
        return Signature(self.q, self.p)


def as_matrix(M, name="matrix"):
    """Return ``M`` as a square, finite ``complex128`` array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"{name} must be a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ParameterError(f"{name} has non-finite entries")
    return A


def fro(M):
    return float(np.linalg.norm(M))


def identity(n):
    return np.eye(n, dtype=complex)


def J(n):
    """The ``2n x 2n`` block matrix ``[[0, I], [-I, 0]]``."""
    if n < 1:
        raise ParameterError(f"J needs n >= 1, got {n}")
    Z = np.zeros((2 * n, 2 * n), dtype=complex)
    Z[:n, n:] = np.eye(n)
    Z[n:, :n] = -np.eye(n)
    return Z


def Ipq(p, q):
    if p < 0 or q < 0 or p + q < 1:
        raise ParameterError(f"invalid (p, q) = ({p}, {q})")
    return np.diag(np.r_[np.ones(p), -np.ones(q)]).astype(complex)


def Kpq(p, q):
    """``diag(I_{p,q}, I_{p,q})``, of size ``2(p+q)``."""
    I = Ipq(p, q)
    return np.block([[I, np.zeros_like(I)], [np.zeros_like(I), I]])


def Dpq(p, q):
    """``diag(I_p, i I_q)``; satisfies ``D^T I_{p,q} D = I``."""
    if p < 0 or q < 0 or p + q < 1:
        raise ParameterError(f"invalid (p, q) = ({p}, {q})")
    return np.diag(np.r_[np.ones(p), 1j * np.ones(q)]).astype(complex)


def special_matrix(kind, n=None, p=None, q=None):
    """Build one of the named block matrices.

    Parameters
    ----------
    kind : {"Identity", "J", "Ipq", "Kpq", "Dpq"}
    n : int
        Size for ``Identity``; half-size for ``J`` (the result is ``2n x 2n``).
    p, q : int
        Signature parameters for ``Ipq``, ``Kpq`` and ``Dpq``.
    """
    if kind in ("Identity", "I"):
        if n is None or n < 1:
            raise ParameterError("Identity needs n >= 1")
        return identity(n)
    if kind == "J":
        if n is None:
            raise ParameterError("J needs n")
        return J(n)
    if kind in ("Ipq", "Kpq", "Dpq"):
        if p is None or q is None:
            raise ParameterError(f"{kind} needs p and q")
        if n is not None and n != {"Kpq": 2 * (p + q)}.get(kind, p + q):
            raise ParameterError(f"{kind}({p},{q}) is inconsistent with size {n}")
        return {"Ipq": Ipq, "Kpq": Kpq, "Dpq": Dpq}[kind](p, q)
    raise ParameterError(f"unknown special matrix kind {kind!r}")


def _fix_phases(U):
    # make the largest entry of each column real and positive
    U = U.copy()
    idx = np.argmax(np.abs(U) > np.abs(U).max(axis=0) * (1 - 1e-9), axis=0)
    ph = U[idx, np.arange(U.shape[1])]
    ph = np.where(np.abs(ph) > 0, ph / np.abs(ph), 1.0)
    return U * ph.conj()


def _check_hermitian(H, tol, name="H"):
    scale = fro(H)
    err = fro(H - H.conj().T)
    if not tol.ok(err, scale):
        raise ContractError(f"{name} is not Hermitian (residual {err:.3e}, norm {scale:.3e})")


def _descending(d, U, tol):
    # descending values; within a cluster of equal values, order eigenvectors by the
    # row of their dominant entry so that ties follow the original axis order
    cut = tol.bound(np.abs(d).max() if d.size else 0.0)
    lead = np.argmax(np.abs(U) > np.abs(U).max(axis=0) * (1 - 1e-9), axis=0)
    order = list(np.argsort(-d, kind="stable"))
    out, i = [], 0
    while i < len(order):
        j = i + 1
        while j < len(order) and d[order[i]] - d[order[j]] <= cut:
            j += 1
        out += sorted(order[i:j], key=lambda k: lead[k])
        i = j
    return d[out], _fix_phases(U[:, out])


def hermitian_eig(H, tol=DEFAULT_TOL):
    """Eigendecomposition ``H = U diag(d) U*`` with ``d`` descending.

    Ties are ordered by the row of each eigenvector's dominant entry, and each
    eigenvector is phase-normalized so that that entry is real positive.
    """
    H = as_matrix(H, "H")
    _check_hermitian(H, tol)
    d, U = np.linalg.eigh((H + H.conj().T) / 2)
    d, U = _descending(d, U, tol)
    return U, d


def signature(H, tol=DEFAULT_TOL):
    """Counts of positive and negative eigenvalues of a nondegenerate Hermitian matrix."""
    H = as_matrix(H, "H")
    _check_hermitian(H, tol)
    d = np.linalg.eigvalsh((H + H.conj().T) / 2)
    cut = tol.bound(np.abs(d).max() if d.size else 0.0)
    if np.any(np.abs(d) <= cut):
        raise DegenerateFormError(f"form is degenerate: min |eigenvalue| = {np.abs(d).min():.3e}")
    return Signature(int(np.sum(d > 0)), int(np.sum(d < 0)))


_PF_MAX = 8


def _pf(A):
    m = A.shape[0]
    if m == 0:
        return 1.0 + 0j
    if m == 2:
        return A[0, 1]
    total = 0j
    rest = np.arange(1, m)
    for k, j in enumerate(rest):
        if A[0, j] == 0:
            continue
        keep = np.delete(rest, k)
        total += (-1) ** k * A[0, j] * _pf(A[np.ix_(keep, keep)])
    return total


def pfaffian(A, tol=DEFAULT_TOL):
    """Pfaffian of a skew-symmetric matrix of even size at most 8 (row expansion)."""
    A = as_matrix(A, "A")
    m = A.shape[0]
    if m % 2:
        raise ContractError(f"Pfaffian needs even size, got {m}")
    if m > _PF_MAX:
        raise UnsupportedSizeError(f"Pfaffian expansion limited to size {_PF_MAX}, got {m}")
    err = fro(A + A.T)
    if not tol.ok(err, fro(A)):
        raise ContractError(f"matrix is not skew-symmetric (residual {err:.3e})")
    return complex(_pf((A - A.T) / 2))


def sylvester_real(C, tol=DEFAULT_TOL):
    """Real congruence normal form ``C = R^T I_{p,q} R`` of a real symmetric matrix."""
    C = as_matrix(C, "C")
    scale = fro(C)
    if not tol.ok(fro(C.imag), scale):
        raise ContractError("sylvester_real needs a real matrix")
    Cr = C.real
    if not tol.ok(np.linalg.norm(Cr - Cr.T), scale):
        raise ContractError("sylvester_real needs a symmetric matrix")
    d, U = np.linalg.eigh((Cr + Cr.T) / 2)
    d, U = _descending(d, U, tol)
    U = U.real
    if np.any(np.abs(d) <= tol.bound(np.abs(d).max())):
        raise DegenerateFormError(f"symmetric form is singular: min |eigenvalue| = {np.abs(d).min():.3e}")
    R = np.sqrt(np.abs(d))[:, None] * U.T
    return R.astype(complex), Signature(int(np.sum(d > 0)), int(np.sum(d < 0)))


def numerical_rank(s, tol=DEFAULT_TOL, guard=True, what="matrix"):
    """Rank from singular values ``s`` with threshold ``tol.rel * max(s)``.

    With ``guard`` set, a singular value within a factor 10 of the threshold raises
    :class:`IndeterminateError`.
    """
    s = np.asarray(s, dtype=float)
    if s.size == 0:
        return 0
    thr = max(tol.rel * s.max(), tol.abs)
    if guard:
        band = (s > thr / 10) & (s < thr * 10)
        if np.any(band):
            gap = float(s[band].min() / max(s.max(), tol.abs))
            raise IndeterminateError(
                f"rank of {what} is indeterminate: relative singular value {gap:.3e} "
                f"is within 10x of threshold {tol.rel:.1e}",
                gap=gap,
            )
    return int(np.sum(s > thr))


def null_space(A, tol=DEFAULT_TOL, guard=True, what="operator"):
    """Orthonormal basis (columns) of the numerical null space of ``A``."""
    A = np.asarray(A)
    k = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(k, dtype=A.dtype)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = numerical_rank(s, tol, guard=guard, what=what)
    return Vh[r:].conj().T
