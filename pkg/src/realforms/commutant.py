"""Commutants, intertwiners, irreducibility and semi-simplicity tests, isotypic splitting.

All linear solves stack one Sylvester-type operator per generator and take a
numerical null space; each block is divided by the norms of the matrices involved
so that a badly scaled generator does not swamp the others.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from . import matcore as mc
from .errors import IndeterminateError, ParameterError, SemiSimplicityError
from .grouprep import GroupKind, Representation
from .matcore import DEFAULT_TOL

__all__ = [
    "IsotypicBlock",
    "IsotypicDecomposition",
    "algebra_basis",
    "commutant_basis",
    "intertwiner",
    "intertwiner_space",
    "is_irreducible",
    "is_semisimple",
    "isotypic_decomposition",
    "sub_representation",
]


def _gens(rep):
    return rep.generators if isinstance(rep, Representation) else tuple(np.asarray(g, complex) for g in rep)


def _sylvester_stack(A_list, B_list):
    # row-major vec: vec(X A - B X) = (I kron A^T - B kron I) vec(X)
    n1 = A_list[0].shape[0]
    n2 = B_list[0].shape[0]
    I1, I2 = np.eye(n1), np.eye(n2)
    blocks = []
    for A, B in zip(A_list, B_list):
        op = np.kron(I2, A.T) - np.kron(B, I1)
        blocks.append(op / (np.linalg.norm(A) + np.linalg.norm(B)))
    return np.vstack(blocks)


def _normalize_phase(X):
    X = X / np.linalg.norm(X)
    flat = X.ravel()
    k = int(np.argmax(np.abs(flat) > np.abs(flat).max() * (1 - 1e-9)))
    return X * (abs(flat[k]) / flat[k])


def intertwiner_space(rep1, rep2, tol=DEFAULT_TOL):
    """Frobenius-orthonormal basis of ``{X : X rho1(g) = rho2(g) X for all g}``.

    ``X`` has shape ``(n2, n1)``; the two representations may have different sizes.
    """
    A, B = _gens(rep1), _gens(rep2)
    if len(A) != len(B):
        raise ParameterError("representations must have the same number of generators")
    n1, n2 = A[0].shape[0], B[0].shape[0]
    N = mc.null_space(_sylvester_stack(A, B), tol, what="intertwiner operator")
    return [N[:, k].reshape(n2, n1) for k in range(N.shape[1])]


def _generic_element(basis, seed):
    if len(basis) == 1:
        return basis[0]
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    return sum(ci * Xi for ci, Xi in zip(c, basis))


def _is_invertible(X, tol):
    s = np.linalg.svd(X, compute_uv=False)
    return mc.numerical_rank(s, tol, guard=False) == X.shape[0]


def intertwiner(rep1, rep2, tol=DEFAULT_TOL, seed=0, return_status=False):
    """An invertible ``P`` with ``P rho1(g) = rho2(g) P`` for every generator.

    Returns ``None`` when no intertwiner exists or when every intertwiner is
    singular.  With ``return_status`` set, returns ``(P, status)`` where status is
    one of ``"ok"``, ``"none"`` or ``"singular"``.  ``P`` has unit Frobenius norm
    and its first largest entry is real positive.
    """
    A, B = _gens(rep1), _gens(rep2)
    if A[0].shape != B[0].shape:
        raise ParameterError("intertwiner needs representations of the same dimension")
    basis = intertwiner_space(A, B, tol)
    if not basis:
        return (None, "none") if return_status else None
    P = None
    for attempt in range(3):
        X = _generic_element(basis, seed + attempt)
        if _is_invertible(X, tol):
            P = _normalize_phase(X)
            break
        if len(basis) == 1:
            break
    if P is None:
        return (None, "singular") if return_status else None
    return (P, "ok") if return_status else P


def commutant_basis(rep, tol=DEFAULT_TOL):
    """Frobenius-orthonormal basis of the joint commutant of the generators."""
    return intertwiner_space(rep, rep, tol)


def algebra_basis(rep, tol=DEFAULT_TOL):
    """Orthonormal basis (as ``n^2 x r`` columns) of the algebra spanned by the image."""
    gens = [g / np.linalg.norm(g, 2) for g in _gens(rep)]
    n = gens[0].shape[0]
    Q = np.eye(n, dtype=complex).reshape(-1, 1) / np.sqrt(n)
    while True:
        cand = []
        for k in range(Q.shape[1]):
            X = Q[:, k].reshape(n, n)
            for g in gens:
                c = (X @ g).ravel()
                cand.append(c / max(np.linalg.norm(c), 1e-300))
        M = np.hstack([Q, np.array(cand).T])
        U, s, _ = np.linalg.svd(M, full_matrices=False)
        r = mc.numerical_rank(s, tol, what="generated algebra")
        if r == Q.shape[1] or r == n * n:
            return U[:, :r] if r > Q.shape[1] else Q
        Q = U[:, :r]


def is_irreducible(rep, tol=DEFAULT_TOL):
    """Irreducibility over C: commutant of dimension 1 and a full generated algebra."""
    n = rep.n
    if n == 1:
        return True
    if len(commutant_basis(rep, tol)) != 1:
        return False
    return algebra_basis(rep, tol).shape[1] == n * n


def is_semisimple(rep, tol=DEFAULT_TOL):
    """Semi-simplicity of the generated algebra via nondegeneracy of its trace form."""
    Q = algebra_basis(rep, tol)
    n = rep.n
    mats = [Q[:, k].reshape(n, n) for k in range(Q.shape[1])]
    G = np.array([[np.trace(X @ Y) for Y in mats] for X in mats])
    s = np.linalg.svd(G, compute_uv=False)
    return mc.numerical_rank(s, tol, what="trace form") == len(mats)


def sub_representation(rep, V, validate=False):
    """Restriction of ``rep`` to the invariant subspace spanned by the columns of ``V``."""
    Vp = np.linalg.pinv(V)
    gens = [Vp @ g @ V for g in rep.generators]
    return Representation(GroupKind("GL", V.shape[1]), gens, rep.labels, validate=validate)


@dataclass
class IsotypicBlock:
    irrep: Representation
    multiplicity: int
    basis: np.ndarray  # n x (dim * multiplicity); copy k occupies columns [k*dim, (k+1)*dim)

    @property
    def dim(self):
        return self.irrep.n


@dataclass
class IsotypicDecomposition:
    blocks: list

    @property
    def T(self):
        """Change of basis: ``T^-1 rho(g) T`` is block diagonal with aligned copies."""
        return np.hstack([b.basis for b in self.blocks])

    def block_generators(self):
        out = []
        for k in range(self.blocks[0].irrep.num_generators):
            parts = []
            for b in self.blocks:
                parts += [b.irrep.generators[k]] * b.multiplicity
            out.append(block_diag(*parts).astype(complex))
        return out

    def reassemble(self):
        T = self.T
        Ti = np.linalg.inv(T)
        return [T @ D @ Ti for D in self.block_generators()]

    def signature(self):
        return sorted((b.dim, b.multiplicity) for b in self.blocks)


def _eigen_subspaces(X, scale_tol=1e-6):
    w, V = np.linalg.eig(X)
    scale = max(np.abs(w).max(), 1e-300)
    order = np.lexsort((w.imag, w.real))
    groups = []
    for i in order:
        for g in groups:
            if abs(w[g[0]] - w[i]) <= scale_tol * scale:
                g.append(i)
                break
        else:
            groups.append([i])
    spaces = []
    for g in groups:
        U = np.linalg.svd(V[:, g], full_matrices=False)[0]
        spaces.append(U[:, : len(g)])
    return spaces


def _attempt(rep, tol, seed):
    n = rep.n
    C = commutant_basis(rep, tol)
    if len(C) == 1:
        return [(rep, [np.eye(n, dtype=complex)])]
    X = _generic_element(C, seed)
    pieces = [(V, sub_representation(rep, V)) for V in _eigen_subspaces(X)]
    classes = []  # list of (reference irrep, [bases])
    for V, sub in pieces:
        for ref, bases in classes:
            if ref.n != sub.n:
                continue
            P, status = intertwiner(ref, sub, tol, seed=seed, return_status=True)
            if status == "ok":
                # align: rho V P = V sub P = V P ref
                bases.append(V @ P)
                break
        else:
            classes.append((sub, [V]))
    return classes


def _projector(bases):
    B = np.hstack(bases)
    return B @ np.linalg.pinv(B)


def isotypic_decomposition(rep, tol=DEFAULT_TOL, seed=0, max_retries=5):
    """Split a semi-simple representation into isotypic blocks.

    Irreducible pieces come from eigenspaces of a seeded random commutant element;
    pieces are grouped by intertwiner tests and copies are re-based so that every
    copy carries the identical matrices.  Two independent draws must agree on the
    block structure and on the isotypic subspaces.
    """
    if not is_semisimple(rep, tol):
        raise SemiSimplicityError(
            "representation is not semi-simple: the trace form of its algebra is degenerate"
        )
    for attempt in range(max_retries):
        s1 = seed + 2 * attempt
        a = _attempt(rep, tol, s1)
        b = _attempt(rep, tol, s1 + 1)
        sig_a = sorted((r.n, len(v)) for r, v in a)
        sig_b = sorted((r.n, len(v)) for r, v in b)
        if sig_a != sig_b:
            continue
        if not all(is_irreducible(r, tol) for r, _ in a):
            continue
        # match isotypic subspaces across draws
        ok = True
        for r, v in a:
            Pa = _projector(v)
            if not any(np.linalg.norm(Pa - _projector(w)) <= 1e-6 * np.linalg.norm(Pa) for _, w in b):
                ok = False
                break
        if not ok:
            continue
        blocks = [IsotypicBlock(r, len(v), np.hstack(v)) for r, v in a]
        return IsotypicDecomposition(blocks)
    raise IndeterminateError("isotypic decomposition is unstable across random commutant draws", gap=None)
