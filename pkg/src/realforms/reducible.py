"""Semi-simple GL(n, C) representations fixed by Phi1 or Phi2.

The isotypic blocks are matched with their involution images.  Self-matched
blocks are classified as irreducibles; a block matched with a different block is
handled by the doubling constructions:

* Phi2: ``rho + Phi2(rho)`` preserves the split form ``[[0, I], [I, 0]]``;
* Phi1: ``[[I, I], [-I, I]] diag(rho, conj(rho)) [[I, I], [-I, I]]^-1`` is
  quaternionic, ``[[Re rho, -i Im rho], [-i Im rho, Re rho]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from . import matcore as mc
from .classifier import ConjugationCertificate, _reports, classify_irreducible
from .commutant import IsotypicDecomposition, intertwiner, isotypic_decomposition
from .errors import ContractError, NotApplicableError, NumericalFailure, ParameterError
from .grouprep import RealFormTag, Representation
from .invariants import PHI1, PHI2, _which, involution_image, is_phi_fixed, trace_coordinates, word_list
from .matcore import DEFAULT_TOL

__all__ = [
    "DoubleBlock",
    "PhiPairing",
    "classify_semisimple",
    "double_block_conjugate",
    "split_phi_stable",
]


@dataclass
class PhiPairing:
    """Matching of isotypic blocks with their involution images.

    ``self_paired`` lists ``(block index, multiplicity)``; ``cross_paired`` lists
    ``(block index, partner index, multiplicity, X)`` with
    ``X Phi(rho_i) = rho_j X`` and the block earlier in canonical order first.
    """

    decomposition: IsotypicDecomposition
    self_paired: list
    cross_paired: list


def _trace_key(rep):
    words = word_list(rep.num_generators, rep.n, 2)
    t = trace_coordinates(rep, words, with_q=False).traces
    return tuple(np.round(np.c_[t.real, t.imag].ravel(), 6))


def split_phi_stable(rep: Representation, which, tol=DEFAULT_TOL, seed=0) -> PhiPairing:
    """Pair every isotypic block with the block isomorphic to its involution image."""
    which = _which(which)
    dec = isotypic_decomposition(rep, tol, seed)
    blocks = dec.blocks
    partner = {}
    maps = {}
    for i, b in enumerate(blocks):
        img = involution_image(b.irrep, which)
        for j, c in enumerate(blocks):
            if c.dim != b.dim:
                continue
            X = intertwiner(img, c.irrep, tol, seed=seed)
            if X is not None:
                partner[i] = j
                maps[i] = X
                break
        else:
            raise ContractError(f"isotypic block {i} has no partner under {which}")
    self_paired, cross = [], []
    done = set()
    for i, j in partner.items():
        if i in done:
            continue
        if i == j:
            self_paired.append((i, blocks[i].multiplicity))
            done.add(i)
            continue
        if partner.get(j) != i:
            raise ContractError("involution pairing of blocks is not symmetric")
        if blocks[i].multiplicity != blocks[j].multiplicity:
            raise ContractError("paired blocks have different multiplicities")
        a, b = (i, j) if _trace_key(blocks[i].irrep) <= _trace_key(blocks[j].irrep) else (j, i)
        cross.append((a, b, blocks[a].multiplicity, maps[a]))
        done.update((i, j))
    return PhiPairing(dec, self_paired, cross)


@dataclass
class DoubleBlock:
    """Local data for ``rho + Phi(rho)``.

    ``conjugator`` maps ``diag(rho, Phi(rho))`` into the target block form:
    quaternionic for Phi1, ``U(d, d)`` (form ``I_{d,d}``) for Phi2.  ``form`` is
    the Hermitian form ``[[0, I], [I, 0]]`` preserved by ``diag(rho, Phi2(rho))``
    (``None`` for Phi1).
    """

    which: str
    conjugator: np.ndarray
    form: np.ndarray | None
    signature: mc.Signature | None


def double_block_conjugate(subrep, which) -> DoubleBlock:
    which = _which(which)
    d = subrep.n if isinstance(subrep, Representation) else int(subrep)
    I = np.eye(d)
    if which == PHI1:
        T0 = np.block([[I, I], [-I, I]]) / np.sqrt(2)
        return DoubleBlock(which, T0.astype(complex), None, None)
    F = np.block([[0 * I, I], [I, 0 * I]]).astype(complex)
    L = np.block([[I, I], [I, -I]]) / np.sqrt(2)  # L^* F L = I_{d,d}
    return DoubleBlock(which, np.linalg.inv(L).astype(complex), F, mc.Signature(d, d))


def _copy_cols(dec, b, k):
    off = sum(x.dim * x.multiplicity for x in dec.blocks[:b])
    d = dec.blocks[b].dim
    return list(range(off + k * d, off + (k + 1) * d))


def classify_semisimple(rep: Representation, which, tol=DEFAULT_TOL, seed=0) -> ConjugationCertificate:
    """Conjugate a semi-simple Phi-fixed GL/SL representation into real form(s).

    Phi2 yields one ``U(p, q)`` (``SU`` for the SL kind).  Phi1 yields a
    block-diagonal certificate with a real block ``GL(r1, R)`` followed by a
    quaternionic block ``GL(r2, H)``; when only one of them is present the
    certificate carries that single tag.
    """
    which = _which(which)
    if rep.kind.name not in ("GL", "SL"):
        raise ParameterError("reducible classification is implemented for GL and SL kinds only")
    if not is_phi_fixed(rep, which, tol, seed=seed).fixed:
        raise NotApplicableError(f"representation is not {which}-fixed", reason="not phi-fixed")
    pairing = split_phi_stable(rep, which, tol, seed)
    dec = pairing.decomposition
    T = dec.T
    units = []  # (columns in T, local conjugator, payload)
    notes = [f"{rep.kind.name}, {which}, semi-simple"]
    for b, mult in pairing.self_paired:
        blk = dec.blocks[b]
        c = classify_irreducible(blk.irrep, which, tol, seed=seed, check=False)
        local, C = c.tag, c.P
        for k in range(mult):
            units.append((_copy_cols(dec, b, k), C, local))
    for a, bb, mult, X in pairing.cross_paired:
        d = dec.blocks[a].dim
        db = double_block_conjugate(d, which)
        Xi = np.linalg.inv(X)
        C = db.conjugator @ block_diag(np.eye(d), Xi)
        local = RealFormTag("U", (d, d)) if which == PHI2 else RealFormTag("GL_H", (d,))
        for k in range(mult):
            units.append((_copy_cols(dec, a, k) + _copy_cols(dec, bb, k), C, local))
    notes.append(
        f"{len(pairing.self_paired)} self-paired block(s), {len(pairing.cross_paired)} cross pair(s)"
    )
    if which == PHI2:
        return _assemble_phi2(rep, T, units, tol, notes)
    return _assemble_phi1(rep, T, units, tol, notes)


def _assemble(T, units, order):
    cols = [c for u in units for c in u[0]]
    C = block_diag(*[u[1] for u in units])
    Tsub = T[:, cols]
    P = C @ np.linalg.inv(Tsub)
    return P[order]


def _finish(rep, P, tag, tol, notes, blocks=None):
    residuals = _reports(rep, P, tag, tol, blocks)
    cert = ConjugationCertificate(tag, P, residuals, None, notes, blocks)
    bad = [r for r in residuals if not r.passed]
    if bad:
        raise NumericalFailure(
            f"semi-simple certificate fails verification (max relative residual "
            f"{max(r.max_relative for r in bad):.3e})",
            branch=notes,
        )
    return cert


def _assemble_phi2(rep, T, units, tol, notes):
    signs = np.concatenate([np.diag(mc.Ipq(*u[2].params)).real for u in units])
    if np.sum(signs > 0) < np.sum(signs < 0):
        signs = -signs
    order = np.argsort(signs < 0, kind="stable")
    P = _assemble(T, units, order)
    p = int(np.sum(signs > 0))
    sig = (p, rep.n - p)
    notes.append(f"assembled signature {sig}")
    special = rep.kind.name == "SL"
    if special:
        P = P / np.linalg.det(P) ** (1.0 / rep.n)
    tag = RealFormTag("SU" if special else "U", sig)
    return _finish(rep, P, tag, tol, notes)


def _assemble_phi1(rep, T, units, tol, notes):
    real = [u for u in units if u[2].name in ("GL_R", "SL_R")]
    quat = [u for u in units if u[2].name in ("GL_H", "SL_H")]
    units = real + quat
    r1 = sum(len(u[0]) for u in real)
    # interleave the quaternionic blocks so the whole tail is standard for J_{r2}
    first, second = [], []
    off = r1
    for u in quat:
        h = len(u[0]) // 2
        first += list(range(off, off + h))
        second += list(range(off + h, off + 2 * h))
        off += 2 * h
    order = np.array(list(range(r1)) + first + second, dtype=int)
    P = _assemble(T, units, order)
    r2 = len(first)
    special = rep.kind.name == "SL"
    if special:
        P = P / np.linalg.det(P) ** (1.0 / rep.n)
    notes.append(f"r1 = {r1}, r2 = {r2}")
    if r2 == 0:
        return _finish(rep, P, RealFormTag("SL_R" if special else "GL_R", (r1,)), tol, notes)
    if r1 == 0:
        return _finish(rep, P, RealFormTag("SL_H" if special else "GL_H", (r2,)), tol, notes)
    blocks = [(RealFormTag("GL_R", (r1,)), 0, r1), (RealFormTag("GL_H", (r2,)), r1, 2 * r2)]
    return _finish(rep, P, None, tol, notes, blocks)
