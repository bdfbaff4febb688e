"""Trace coordinates, the polarized Pfaffian ``Q``, the involutions Phi1/Phi2 and fixedness."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache

import numpy as np

from .commutant import intertwiner
from .errors import ParameterError, SemiSimplicityError, UnsupportedSizeError
from .grouprep import Representation, evaluate_word, matrix_to_json
from .matcore import DEFAULT_TOL

__all__ = [
    "DEFAULT_WORD_CAP",
    "PHI1",
    "PHI2",
    "CharacterCoordinates",
    "PhiVerdict",
    "format_word",
    "invert_word",
    "involution_image",
    "is_phi_fixed",
    "q_function",
    "trace_coordinates",
    "word_list",
]

PHI1 = "Phi1"
PHI2 = "Phi2"
DEFAULT_WORD_CAP = 4
Q_MAX_SIZE = 8


def _which(which):
    w = str(which).lower()
    if w in ("phi1", "1"):
        return PHI1
    if w in ("phi2", "2"):
        return PHI2
    raise ParameterError(f"involution must be Phi1 or Phi2, got {which!r}")


def invert_word(w):
    return tuple(-x for x in reversed(w))


def format_word(w):
    letters = "abcdefghijklmnopqrstuvwxyz"
    out = []
    for x in w:
        c = letters[abs(x) - 1] if abs(x) <= 26 else f"g{abs(x)}"
        out.append(c if x > 0 else c + "^-1")
    return " ".join(out)


def word_list(num_generators, n, cap=DEFAULT_WORD_CAP):
    """All nonempty reduced words of length ``<= min(cap, 2**n - 1)``.

    Words are tuples of signed 1-based generator indices.  Order: by length,
    then lexicographically with ``a < a^-1 < b < b^-1 < ...``.  The list is closed
    under inversion.
    """
    if cap < 1:
        raise ParameterError("word length cap must be at least 1")
    if num_generators < 1:
        raise ParameterError("need at least one generator")
    L = min(int(cap), 2 ** int(n) - 1)
    letters = [s * i for i in range(1, num_generators + 1) for s in (1, -1)]
    out, layer = [], [()]
    for _ in range(L):
        layer = [w + (x,) for w in layer for x in letters if not (w and w[-1] == -x)]
        out.extend(layer)
    return out


@dataclass
class CharacterCoordinates:
    words: list
    traces: np.ndarray
    qwords: list | None = None
    qvalues: np.ndarray | None = None

    def to_dict(self):
        d = {
            "words": [list(w) for w in self.words],
            "traces": matrix_to_json(np.asarray(self.traces).reshape(1, -1)) if len(self.words) else [],
            "qvalues": None,
        }
        if self.qvalues is not None:
            d["qvalues"] = {
                "tuples": [[list(w) for w in t] for t in self.qwords],
                "values": [[float(z.real), float(z.imag)] for z in self.qvalues],
            }
        return d


def _q_words(words, m):
    short = [w for w in words if len(w) <= 1]
    return list(itertools.combinations_with_replacement(short, m))


def trace_coordinates(rep: Representation, words=None, cap=DEFAULT_WORD_CAP, with_q=True):
    """Traces of ``rho(w)`` over a word list; ``Q`` values are added for even SO kinds."""
    if words is None:
        words = word_list(rep.num_generators, rep.n, cap)
    for w in words:
        if any(x == 0 or abs(x) > rep.num_generators for x in w):
            raise ParameterError(f"word {w} uses a generator index out of range")
    inv = rep.inverses()
    cache = {}

    def image(w):
        if w not in cache:
            cache[w] = evaluate_word(rep.generators, w, inv) if len(w) <= 1 else image(w[:-1]) @ image(w[-1:])
        return cache[w]

    traces = np.array([np.trace(image(tuple(w))) for w in words], dtype=complex)
    qw = qv = None
    if with_q and rep.kind.name == "SO" and rep.n % 2 == 0 and rep.n <= Q_MAX_SIZE:
        qw = _q_words([tuple(w) for w in words], rep.n // 2)
        qv = np.array([q_function([image(w) for w in t]) for t in qw], dtype=complex)
    return CharacterCoordinates(list(map(tuple, words)), traces, qw, qv)


@cache
def _perm_table(size):
    perms = np.array(list(itertools.permutations(range(size))), dtype=np.intp)
    # sign via cycle parity
    signs = np.empty(len(perms))
    for k, p in enumerate(perms):
        seen = np.zeros(size, bool)
        parity = 0
        for i in range(size):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    length += 1
                parity += length - 1
        signs[k] = -1.0 if parity % 2 else 1.0
    return perms, signs


def q_function(matrices):
    """Full polarization of the Pfaffian, as a signed sum over permutations.

    For ``m`` matrices of size ``2m`` with ``K_i = A_i - A_i^T``, returns
    ``sum_sigma sign(sigma) prod_i K_i[sigma(2i-1), sigma(2i)]``.
    """
    mats = [np.asarray(A, dtype=complex) for A in matrices]
    m = len(mats)
    if m < 1:
        raise ParameterError("q_function needs at least one matrix")
    size = 2 * m
    for A in mats:
        if A.shape != (size, size):
            raise ParameterError(f"q_function with {m} arguments needs {size}x{size} matrices, got {A.shape}")
    if size > Q_MAX_SIZE:
        raise UnsupportedSizeError(f"q_function limited to size {Q_MAX_SIZE}, got {size}")
    perms, signs = _perm_table(size)
    prod = np.ones(len(perms), dtype=complex)
    for i, A in enumerate(mats):
        K = A - A.T
        prod *= K[perms[:, 2 * i], perms[:, 2 * i + 1]]
    return complex(signs @ prod)


def involution_image(rep: Representation, which) -> Representation:
    """Entrywise conjugate (Phi1) or conjugate-transpose-inverse (Phi2) of each generator."""
    which = _which(which)
    if which == PHI1:
        gens = [g.conj() for g in rep.generators]
    else:
        gens = [np.linalg.inv(g.conj().T) for g in rep.generators]
    return rep.with_generators(gens)


@dataclass
class PhiVerdict:
    fixed: bool
    P: np.ndarray | None
    coordinates_agree: bool
    coordinate_residual: float

    def __bool__(self):
        return self.fixed


def _coordinate_check(rep, image, tol, cap):
    words = word_list(rep.num_generators, rep.n, cap)
    a = trace_coordinates(rep, words, with_q=False).traces
    b = trace_coordinates(image, words, with_q=False).traces
    norms = [max(np.linalg.norm(g, 2), np.linalg.norm(np.linalg.inv(g), 2)) for g in rep.generators]
    scale = np.array([rep.n * np.prod([norms[abs(x) - 1] for x in w]) for w in words])
    # coordinates are a cross-check only, so allow a floating-point floor above tol
    rel = max(tol.rel, 1e-8)
    resid = np.abs(a - b) / (rel * scale + tol.abs)
    return bool(np.all(resid <= 1.0)), float(np.max(np.abs(a - b) / scale))


def is_phi_fixed(rep: Representation, which, tol=DEFAULT_TOL, cap=DEFAULT_WORD_CAP, seed=0) -> PhiVerdict:
    """Decide whether ``Phi(rho)`` is conjugate to ``rho`` by solving for an intertwiner.

    The returned ``P`` satisfies ``P Phi(rho(g)) = rho(g) P`` and has unit Frobenius
    norm.  Trace coordinates are compared as an independent cross-check.
    """
    image = involution_image(rep, which)
    P, status = intertwiner(image, rep, tol, seed=seed, return_status=True)
    agree, resid = _coordinate_check(rep, image, tol, min(cap, 3))
    if status == "singular":
        if agree:
            raise SemiSimplicityError(
                "intertwiners with the involution image exist but are all singular; "
                "the representation is not semi-simple"
            )
        return PhiVerdict(False, None, agree, resid)
    return PhiVerdict(status == "ok", P, agree, resid)
