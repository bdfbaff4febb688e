"""Conjugation of an irreducible Phi-fixed representation into a real form.

Each branch returns a :class:`ConjugationCertificate` holding the real-form tag and
a matrix ``P`` such that ``P rho(g) P^-1`` satisfies the tag's defining equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc
from .commutant import is_irreducible
from .decomp import antiorthogonal_reduce, antisymplectic_reduce, hilbert90, polar_in_group, reduce_to_Kpq
from .errors import (
    ContractError,
    NotApplicableError,
    NumericalFailure,
    ParameterError,
    PreconditionError,
)
from .formsolver import ORTHOGONAL_I, SYMPLECTIC_J, invariant_hermitian, normalize_lambda
from .grouprep import (
    P0,
    GroupKind,
    MembershipReport,
    RealFormTag,
    Representation,
    Residual,
    matrix_to_json,
    validate_membership,
)
from .invariants import PHI1, PHI2, _which, is_phi_fixed
from .matcore import DEFAULT_TOL

__all__ = [
    "ConjugationCertificate",
    "VerificationReport",
    "classify_irreducible",
    "compact_conjugator",
    "conjugate_generators",
    "verify_certificate",
]


@dataclass
class ConjugationCertificate:
    """Real-form tag, conjugator ``P`` and per-generator residual reports.

    ``blocks`` is set for composite certificates: a list of ``(tag, offset, size)``
    with the conjugated generators block diagonal along those ranges.  A composite
    with blocks of different kinds has ``tag = None``.
    """

    tag: RealFormTag | None
    P: np.ndarray
    residuals: list
    lambda_sign: int | None = None
    notes: list = field(default_factory=list)
    blocks: list | None = None

    @property
    def branch(self):
        return " > ".join(self.notes)

    @property
    def max_residual(self):
        return max((r.max_relative for r in self.residuals), default=0.0)

    @property
    def passed(self):
        return all(r.passed for r in self.residuals)

    def to_dict(self):
        if self.tag is None:
            tag, params = "composite", [b[0].params[0] for b in self.blocks]
            display = " + ".join(str(b[0]) for b in self.blocks)
        else:
            tag, params, display = self.tag.name, list(self.tag.params), str(self.tag)
        d = {
            "tag": tag,
            "params": params,
            "display": display,
            "n": int(self.P.shape[0]),
            "P": matrix_to_json(self.P),
            "residuals": [r.max_relative for r in self.residuals],
            "max_residual": self.max_residual,
            "lambda_sign": self.lambda_sign,
            "branch": self.branch,
        }
        if self.blocks is not None:
            d["blocks"] = [
                {"tag": t.name, "params": list(t.params), "offset": o, "size": s} for t, o, s in self.blocks
            ]
        return d


def conjugate_generators(rep, P):
    Pi = np.linalg.inv(P)
    return [P @ g @ Pi for g in rep.generators]


def _block_reports(sig, blocks, tol):
    reports = []
    for k, M in enumerate(sig):
        rep = MembershipReport(f"generator {k + 1}")
        mask = np.ones(M.shape, bool)
        for tag, o, s in blocks:
            mask[o : o + s, o : o + s] = False
            sub = validate_membership(M[o : o + s, o : o + s], tag, tol)
            rep.residuals.extend(sub.residuals)
        off = np.linalg.norm(M[mask]) if mask.any() else 0.0
        nrm = max(mc.fro(M), 1.0)
        rep.residuals.append(Residual("off-block entries = 0", float(off), nrm, tol.bound(nrm)))
        reports.append(rep)
    return reports


def _reports(rep, P, tag, tol, blocks=None):
    sig = conjugate_generators(rep, P)
    if blocks is not None:
        return _block_reports(sig, blocks, tol)
    return [validate_membership(M, tag, tol) for M in sig]


def _finish(rep, P, tag, tol, notes, lambda_sign=None, ambient=None):
    residuals = _reports(rep, P, tag, tol)
    cert = ConjugationCertificate(tag, P, residuals, lambda_sign, notes)
    bad = [r for r in residuals if not r.passed]
    if ambient is not None:
        amb = validate_membership(P, ambient, tol.scaled(10))
        if not amb.passed:
            bad.append(amb)
    if bad:
        raise NumericalFailure(
            f"certificate for {tag} fails verification (max relative residual "
            f"{max(r.max_relative for r in bad):.3e})",
            branch=notes,
        )
    return cert


def _unit_det(P):
    n = P.shape[0]
    return P / np.linalg.det(P) ** (1.0 / n)


# --- GL / SL ---------------------------------------------------------------------


def _gl_phi2(rep, tol, seed, notes):
    special = rep.kind.name == "SL"
    H = invariant_hermitian(rep, tol, seed)
    if H is None:
        raise NotApplicableError(
            "no invariant Hermitian form: representation is not Phi2-fixed", reason="not phi-fixed"
        )
    sig = mc.signature(H, tol)
    if sig.p < sig.q:
        H, sig = -H, sig.swapped()
        notes.append("negated form for p >= q")
    U, d = mc.hermitian_eig(H, tol)
    S = np.sqrt(np.abs(d))[:, None] * U.conj().T  # H = S^* I_pq S
    notes.append(f"invariant Hermitian form of signature {tuple(sig)}")
    if special:
        S = _unit_det(S)
    tag = RealFormTag("SU" if special else "U", sig)
    return _finish(rep, S, tag, tol, notes)


def _phi1_scalar(P, tol):
    n = P.shape[0]
    PP = P @ P.conj()
    s = np.trace(PP) / n
    resid = mc.fro(PP - s * np.eye(n))
    if not tol.scaled(100).ok(resid, mc.fro(PP)):
        raise ContractError(f"P conj(P) is not scalar (residual {resid:.3e})")
    if abs(s.imag) > tol.scaled(100).bound(abs(s)):
        raise ContractError(f"P conj(P) = s I with non-real s = {s:.6g}")
    return s.real


def _quaternionic_basis(P):
    """Columns ``[W, P conj(W)]`` for an antilinear map ``v -> P conj(v)`` squaring to -1."""
    n = P.shape[0]
    m = n // 2
    Q = np.zeros((n, 0), dtype=complex)
    W = []
    cand = np.eye(n, dtype=complex)
    for _ in range(m):
        R = cand - Q @ (Q.conj().T @ cand)
        k = int(np.argmax(np.linalg.norm(R, axis=0)))
        w = R[:, k] / np.linalg.norm(R[:, k])
        W.append(w)
        Q = np.linalg.qr(np.column_stack([Q, w, P @ w.conj()]))[0]
    W = np.column_stack(W)
    return np.column_stack([W, P @ W.conj()])


def _gl_phi1(rep, tol, seed, notes):
    special = rep.kind.name == "SL"
    n = rep.n
    verdict = is_phi_fixed(rep, PHI1, tol, seed=seed)
    if not verdict.fixed:
        raise NotApplicableError("representation is not Phi1-fixed", reason="not phi-fixed")
    P = verdict.P
    s = _phi1_scalar(P, tol)
    P = P / np.sqrt(abs(s))
    if s > 0:
        notes.append("P conj(P) = +I: Hilbert 90 splitting")
        Q, _ = hilbert90(P.conj(), tol.scaled(100), seed=seed, hermitian=False)
        if special:
            Q = _unit_det(Q)
        tag = RealFormTag("SL_R" if special else "GL_R", (n,))
        return _finish(rep, Q, tag, tol, notes)
    if n % 2:
        raise ContractError("P conj(P) = -I is impossible in odd dimension")
    notes.append("P conj(P) = -I: quaternionic pairing basis")
    T = _quaternionic_basis(P)
    Pc = np.linalg.inv(T)
    if special:
        Pc = _unit_det(Pc)
    tag = RealFormTag("SL_H" if special else "GL_H", (n // 2,))
    return _finish(rep, Pc, tag, tol, notes)


# --- Sp --------------------------------------------------------------------------


def _sp(rep, tol, seed, notes):
    n = rep.n
    H = invariant_hermitian(rep, tol, seed)
    if H is None:
        raise NotApplicableError(
            "no invariant Hermitian form: representation is not Phi-fixed", reason="not phi-fixed"
        )
    H, sign = normalize_lambda(H, SYMPLECTIC_J, tol.scaled(100))
    ambient = GroupKind("Sp", n)
    if sign > 0:
        notes.append("H^T J H = +J: symplectic eigendecomposition")
        sig = mc.signature(H, tol)
        if sig.p < sig.q:
            H = -H
            notes.append("negated form for p >= q")
        S, sig = reduce_to_Kpq(H, tol.scaled(100))
        tag = RealFormTag("Sp_pq", sig)
        return _finish(rep, np.linalg.inv(S), tag, tol, notes, 1, ambient)
    notes.append("H^T J H = -J: anti-symplectic reduction")
    S = antisymplectic_reduce(H, tol.scaled(100))
    S1 = antisymplectic_reduce(1j * mc.J(n // 2), tol)
    P = S1 @ np.linalg.inv(S)
    tag = RealFormTag("Sp_R", (n,))
    return _finish(rep, P, tag, tol, notes, -1, ambient)


# --- O / SO ----------------------------------------------------------------------


def _lambda0(A, B):
    k = 0
    while k < 64:
        lam0 = (k + 1) // 2 * (1 if k % 2 else -1) if k else 0
        C = A + lam0 * B
        if np.linalg.cond(C) < 1e8:
            return lam0, C
        k += 1
    raise ContractError("no real combination A + l B of the invariant forms is invertible")


def _orthogonal(rep, tol, seed, notes):
    n = rep.n
    special = rep.kind.name == "SO"
    H = invariant_hermitian(rep, tol, seed)
    if H is None:
        raise NotApplicableError(
            "no invariant Hermitian form: representation is not Phi-fixed", reason="not phi-fixed"
        )
    H, sign = normalize_lambda(H, ORTHOGONAL_I, tol.scaled(100))
    ambient = rep.kind
    if sign > 0:
        notes.append("H^T H = +I: Hilbert 90, real invariant form")
        Q, _ = hilbert90(H, tol.scaled(100), seed=seed)
        Qi = np.linalg.inv(Q)
        C0 = Qi.T @ Qi
        lam0, C = _lambda0(C0.real, C0.imag)
        notes.append(f"real form A + ({lam0}) B")
        R, sig = mc.sylvester_real(C.real, tol)
        if sig.p < sig.q:
            R, sig = mc.sylvester_real(-C.real, tol)
            notes.append("negated form for p >= q")
        G = mc.Dpq(*sig) @ R @ Q
        mu = (G.T @ G).trace() / n
        P = G / np.sqrt(mu)
        if special and np.linalg.det(P).real < 0:
            if n % 2:
                P = -P
                notes.append("determinant fix: -I")
            else:
                P = mc.Ipq(n - 1, 1) @ P
                notes.append("determinant fix: I_{n-1,1}")
        tag = RealFormTag("SO_pq_copy" if special else "O_pq_copy", sig)
        return _finish(rep, P, tag, tol, notes, 1, ambient)
    if n % 2:
        raise ContractError("H^T H = -I is impossible in odd dimension")
    m = n // 2
    notes.append("H^T H = -I: anti-orthogonal reduction")
    M = antiorthogonal_reduce(H, tol.scaled(100))
    P = M.T
    name = "SO_H" if special else "O_H"
    if special and np.linalg.det(P).real < 0:
        if m % 2:
            K = np.block([[np.zeros((m, m)), np.eye(m)], [np.eye(m), np.zeros((m, m))]]).astype(complex)
            P = K @ P
            notes.append("determinant fix: block swap")
        else:
            P = P0(n) @ P
            name = "SO_H_minus"
            notes.append("determinant fix: P0, SO- form")
    return _finish(rep, P, RealFormTag(name, (m,)), tol, notes, -1, ambient)


def classify_irreducible(rep: Representation, which=PHI2, tol=DEFAULT_TOL, seed=0, check=True):
    """Conjugate an irreducible Phi-fixed representation into a real form.

    Parameters
    ----------
    rep : Representation
    which : {"Phi1", "Phi2"}
        The involution.  It selects the branch for GL/SL kinds; for Sp, O and SO
        kinds both involutions have the same fixed points and the invariant
        Hermitian form drives the construction.
    tol : Tolerance
    seed : int
        Seed for the random combinations used when solution spaces are not
        one-dimensional.
    check : bool
        Verify irreducibility and Phi-fixedness first.

    Returns
    -------
    ConjugationCertificate
    """
    which = _which(which)
    if check:
        if not is_irreducible(rep, tol):
            raise NotApplicableError("representation is not irreducible", reason="not irreducible")
        gl_phi1 = rep.kind.name in ("GL", "SL") and which == PHI1  # checked inside the branch
        if not gl_phi1 and not is_phi_fixed(rep, which, tol, seed=seed).fixed:
            raise NotApplicableError(f"representation is not {which}-fixed", reason="not phi-fixed")
    notes = [f"{rep.kind.name}, {which}"]
    kind = rep.kind.name
    if kind in ("GL", "SL"):
        return _gl_phi2(rep, tol, seed, notes) if which == PHI2 else _gl_phi1(rep, tol, seed, notes)
    if kind == "Sp":
        return _sp(rep, tol, seed, notes)
    return _orthogonal(rep, tol, seed, notes)


@dataclass
class VerificationReport:
    generators: list
    conjugator: MembershipReport | None

    @property
    def passed(self):
        ok = all(r.passed for r in self.generators)
        return ok and (self.conjugator is None or self.conjugator.passed)

    @property
    def max_residual(self):
        return max((r.max_relative for r in self.generators), default=0.0)

    def to_dict(self):
        return {
            "pass": self.passed,
            "max_residual": self.max_residual,
            "generators": [r.to_dict() for r in self.generators],
            "conjugator": None if self.conjugator is None else self.conjugator.to_dict(),
        }


def verify_certificate(rep, cert: ConjugationCertificate, tol=DEFAULT_TOL) -> VerificationReport:
    """Recompute ``P rho(g) P^-1`` and check the certificate's membership claims."""
    P = mc.as_matrix(cert.P, "P")
    if P.shape[0] != rep.n:
        raise ParameterError("certificate size does not match the representation")
    gens = _reports(rep, P, cert.tag, tol, cert.blocks)
    conj = None
    if rep.kind.name in ("Sp", "O", "SO") and cert.blocks is None:
        conj = validate_membership(P, rep.kind, tol.scaled(10))
    return VerificationReport(gens, conj)


_COMPACT = {
    "GL": lambda n: RealFormTag("U", (n, 0)),
    "SL": lambda n: RealFormTag("SU", (n, 0)),
    "O": lambda n: RealFormTag("O_pq_copy", (n, 0)),
    "SO": lambda n: RealFormTag("SO_pq_copy", (n, 0)),
    "Sp": lambda n: RealFormTag("Sp_pq", (n, 0)),
}


def compact_conjugator(rep1, rep2, P, tol=DEFAULT_TOL):
    """Unitary polar factor of a conjugator between two representations in a compact form.

    Returns ``(U, residual)`` where ``residual`` is the largest relative error of
    ``U rho1(g) U^-1 = rho2(g)``.
    """
    P = mc.as_matrix(P, "P")
    compact = _COMPACT[rep1.kind.name](rep1.n)
    for r in (rep1, rep2):
        for g in r.generators:
            if not validate_membership(g, compact, tol).passed:
                raise PreconditionError(f"generator is not in the compact form {compact}")
    for g1, g2 in zip(conjugate_generators(rep1, P), rep2.generators):
        if not tol.scaled(10).ok(mc.fro(g1 - g2), mc.fro(g2)):
            raise PreconditionError("P does not conjugate rep1 to rep2")
    U, _ = polar_in_group(P, GroupKind("GL", rep1.n), tol)
    resid = max(mc.fro(a - b) / mc.fro(b) for a, b in zip(conjugate_generators(rep1, U), rep2.generators))
    return U, resid
