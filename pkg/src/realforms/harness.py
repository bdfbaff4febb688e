"""Random representations inside each real form, ambient scrambling, round-trip trials."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import matcore as mc
from .classifier import classify_irreducible, verify_certificate
from .commutant import is_irreducible
from .errors import RealFormError
from .grouprep import P0, GroupKind, RealFormTag, Representation
from .invariants import PHI1, PHI2
from .matcore import Tolerance

__all__ = [
    "HARNESS_TOL",
    "LIE_SCALE",
    "PASS_RESIDUAL",
    "TrialReport",
    "acceptance_tags",
    "default_involution",
    "lie_algebra_element",
    "random_ambient",
    "roundtrip_trial",
    "sample_real_form",
    "scramble",
    "tags_match",
]

LIE_SCALE = 0.5
PASS_RESIDUAL = 1e-6
# rank decisions on scrambled inputs; residual acceptance is PASS_RESIDUAL
HARNESS_TOL = Tolerance(rel=1e-8, abs=1e-12)


def _gauss(rng, shape, cplx=True):
    z = rng.standard_normal(shape)
    if cplx:
        z = z + 1j * rng.standard_normal(shape)
    return LIE_SCALE * z


def _quaternionic_block(A, B):
    return np.block([[A, -B.conj()], [B, A.conj()]])


def lie_algebra_element(tag: RealFormTag, rng):
    """Random element of the Lie algebra of ``tag`` (entries of scale :data:`LIE_SCALE`)."""
    name, n = tag.name, tag.ambient.n
    if name in ("GL_R", "SL_R"):
        X = _gauss(rng, (n, n), cplx=False).astype(complex)
        if name == "SL_R":
            X -= np.trace(X) / n * np.eye(n)
        return X
    if name in ("GL_H", "SL_H"):
        m = n // 2
        A, B = _gauss(rng, (m, m)), _gauss(rng, (m, m))
        if name == "SL_H":
            A -= np.trace(A).real / m * np.eye(m)
        return _quaternionic_block(A, B)
    if name in ("U", "SU"):
        A = _gauss(rng, (n, n))
        X = mc.Ipq(*tag.params) @ (A - A.conj().T) / 2
        if name == "SU":
            X -= np.trace(X) / n * np.eye(n)
        return X
    if name == "Sp_R":
        S = _gauss(rng, (n, n), cplx=False)
        return (mc.J(n // 2) @ (S + S.T) / 2).astype(complex)
    if name == "Sp_pq":
        S = _gauss(rng, (n, n))
        X = mc.J(n // 2) @ (S + S.T) / 2
        K = mc.Kpq(*tag.pq)
        return (X - K @ X.conj().T @ K) / 2
    if name in ("O_pq_copy", "SO_pq_copy"):
        A = _gauss(rng, (n, n), cplx=False)
        return (mc.Ipq(*tag.params) @ (A - A.T) / 2).astype(complex)
    if name in ("O_H", "SO_H", "SO_H_minus"):
        m = n // 2
        A, B = _gauss(rng, (m, m)), _gauss(rng, (m, m))
        return _quaternionic_block((A - A.T) / 2, (B + B.conj().T) / 2)
    raise ValueError(name)


def _reflection(n):
    R = np.eye(n, dtype=complex)
    R[0, 0] = -1
    return R


def sample_real_form(tag: RealFormTag, num_generators=2, seed=0) -> Representation:
    """Generators ``exp(X)`` for random Lie-algebra elements ``X`` of the tag's group.

    ``O_pq_copy`` samples also receive a reflection on one generator (drawn at
    random) so that the non-identity component is exercised; the real ``O(p,q)``
    sample is then moved into the copy by ``D_{p,q}``.  ``SO_H_minus`` samples
    are ``P0 M P0^-1`` with ``M`` in ``SO(2m, H)``.
    """
    if isinstance(tag, str):
        tag = RealFormTag.parse(tag)
    rng = np.random.default_rng(seed)
    n = tag.ambient.n
    gens = [expm(lie_algebra_element(tag, rng)) for _ in range(num_generators)]
    if tag.name == "O_pq_copy":
        flips = rng.random(num_generators) < 0.5
        gens = [_reflection(n) @ g if f else g for g, f in zip(gens, flips)]
    if tag.name in ("O_pq_copy", "SO_pq_copy"):
        D = mc.Dpq(*tag.params)
        Di = np.linalg.inv(D)
        gens = [D @ g @ Di for g in gens]
    if tag.name in ("GL_R", "SL_R", "Sp_R"):
        gens = [g.real.astype(complex) for g in gens]
    if tag.name == "SO_H_minus":
        Q = P0(n)
        gens = [Q @ g @ Q for g in gens]
    return Representation(tag.ambient, gens, validate=False)


def random_ambient(kind: GroupKind, rng, reflect=None):
    """``exp`` of a random element of the complex Lie algebra of ``kind``.

    For the ``O`` kind a reflection is appended when ``reflect`` is true (or at
    random when it is ``None``).
    """
    n = kind.n
    X = _gauss(rng, (n, n))
    if kind.name == "SL":
        X -= np.trace(X) / n * np.eye(n)
    elif kind.name == "Sp":
        X = mc.J(n // 2) @ (X + X.T) / 2
    elif kind.name in ("O", "SO"):
        X = (X - X.T) / 2
    g = expm(X)
    if kind.name == "O":
        if reflect is None:
            reflect = rng.random() < 0.5
        if reflect:
            g = g @ _reflection(n)
    return g


def scramble(rep: Representation, rng):
    """Conjugate by a random ambient element; returns ``(scrambled, P0)``."""
    P = random_ambient(rep.kind, rng)
    return rep.conjugate(P), P


def default_involution(tag: RealFormTag):
    if tag.name in ("GL_R", "SL_R", "GL_H", "SL_H"):
        return PHI1
    return PHI2


_SO_H_PAIR = {"SO_H", "SO_H_minus"}


def tags_match(seeded: RealFormTag, recovered: RealFormTag):
    """Equality up to the documented equivalences.

    Signatures are stored with ``p >= q``, so the ``(p,q) <-> (q,p)`` swap is
    already absorbed.  ``SO_H(m)`` and ``SO_H_minus(m)`` are accepted for each
    other: which one a scrambled sample lands in depends on the determinant of
    the conjugator the classifier finds.
    """
    if seeded == recovered:
        return True
    return seeded.params == recovered.params and {seeded.name, recovered.name} <= _SO_H_PAIR


@dataclass
class TrialReport:
    seeded_tag: RealFormTag
    recovered_tag: RealFormTag | None
    max_residual: float
    irreducible: bool
    elapsed: float
    seed: int
    status: str = "ok"  # ok | skipped | error
    attempts: int = 1
    scrambler_det: complex | None = None
    lambda_sign: int | None = None
    branch: str = ""
    error: str | None = None

    @property
    def passed(self):
        return (
            self.status == "ok"
            and self.recovered_tag is not None
            and tags_match(self.seeded_tag, self.recovered_tag)
            and self.max_residual <= PASS_RESIDUAL
        )

    def to_dict(self):
        return {
            "seeded_tag": self.seeded_tag.key,
            "recovered_tag": None if self.recovered_tag is None else self.recovered_tag.key,
            "pass": self.passed,
            "status": self.status,
            "max_residual": self.max_residual,
            "irreducible": self.irreducible,
            "elapsed": self.elapsed,
            "seed": self.seed,
            "attempts": self.attempts,
            "scrambler_det": None
            if self.scrambler_det is None
            else [float(np.real(self.scrambler_det)), float(np.imag(self.scrambler_det))],
            "lambda_sign": self.lambda_sign,
            "branch": self.branch,
            "error": self.error,
        }


def roundtrip_trial(tag, num_generators=2, seed=0, tol=HARNESS_TOL, involution=None, max_resample=10):
    """Sample in ``tag``, scramble in the ambient group, classify, verify.

    Reducible samples are redrawn (up to ``max_resample`` times); GL-kind samples
    that stay reducible go through the semi-simple classifier, all others are
    reported as skipped.  Library errors are reported, never raised.
    """
    from .reducible import classify_semisimple

    if isinstance(tag, str):
        tag = RealFormTag.parse(tag)
    which = involution or default_involution(tag)
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    rep = None
    irreducible = False
    attempts = 0
    for attempts in range(1, max_resample + 1):
        sub = int(rng.integers(2**63))
        rep = sample_real_form(tag, num_generators, sub)
        if is_irreducible(rep, tol):
            irreducible = True
            break
    report = TrialReport(tag, None, float("inf"), irreducible, 0.0, seed, attempts=attempts)
    if not irreducible and tag.ambient.name != "GL":
        report.status = "skipped"
        report.elapsed = time.perf_counter() - t0
        return report
    scrambled, P = scramble(rep, rng)
    report.scrambler_det = complex(np.linalg.det(P))
    try:
        if irreducible:
            cert = classify_irreducible(scrambled, which, tol, seed=seed, check=False)
        else:
            cert = classify_semisimple(scrambled, which, tol, seed=seed)
        ver = verify_certificate(scrambled, cert, tol)
        report.recovered_tag = cert.tag
        report.max_residual = ver.max_residual
        report.lambda_sign = cert.lambda_sign
        report.branch = cert.branch
    except RealFormError as e:
        report.status = "error"
        report.error = f"{type(e).__name__}: {e}"
    report.elapsed = time.perf_counter() - t0
    return report


def acceptance_tags(max_n=6):
    """Every tag with ambient dimension at most ``max_n``, minus the abelian ones.

    ``SO(2, C)`` is abelian, so its real forms ``SO_pq_copy(p, q)`` with ``p+q = 2``
    and ``O_H(1) = SO_H(1)`` never admit irreducible samples; they are left out.
    """
    tags = []
    for n in range(1, max_n + 1):
        tags += [RealFormTag("GL_R", (n,)), RealFormTag("SL_R", (n,))]
        for q in range(n // 2 + 1):
            tags += [RealFormTag("U", (n - q, q)), RealFormTag("SU", (n - q, q))]
            if n != 2:
                tags.append(RealFormTag("SO_pq_copy", (n - q, q)))
            tags.append(RealFormTag("O_pq_copy", (n - q, q)))
    for m in range(1, max_n // 2 + 1):
        tags += [RealFormTag("GL_H", (m,)), RealFormTag("SL_H", (m,)), RealFormTag("Sp_R", (2 * m,))]
        for q in range(m // 2 + 1):
            tags.append(RealFormTag("Sp_pq", (2 * (m - q), 2 * q)))
        if m >= 2:
            tags += [RealFormTag("O_H", (m,)), RealFormTag("SO_H", (m,))]
        if m % 2 == 0:
            tags.append(RealFormTag("SO_H_minus", (m,)))
    return tags
