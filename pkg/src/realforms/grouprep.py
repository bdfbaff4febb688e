"""Representations of free groups into classical complex groups, membership tests, JSON I/O."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc
from .errors import ParameterError, ParseError, ValidationError
from .matcore import DEFAULT_TOL, Tolerance

__all__ = [
    "GROUP_KINDS",
    "P0",
    "TAG_NAMES",
    "GroupKind",
    "MembershipReport",
    "RealFormTag",
    "Representation",
    "Residual",
    "evaluate_word",
    "load_representation",
    "matrix_from_json",
    "matrix_to_json",
    "parse_target",
    "representation_from_dict",
    "representation_to_dict",
    "save_representation",
    "validate_membership",
]

GROUP_KINDS = ("GL", "SL", "O", "SO", "Sp")


@dataclass(frozen=True)
class GroupKind:
    name: str
    n: int

    def __post_init__(self):
        if self.name not in GROUP_KINDS:
            raise ParameterError(f"unknown group kind {self.name!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParameterError(f"dimension must be a positive integer, got {self.n!r}")
        if self.name == "Sp" and self.n % 2:
            raise ParameterError(f"Sp needs an even dimension, got {self.n}")

    def __str__(self):
        return f"{self.name}({self.n},C)"


# name -> (ambient kind, number of params, whether params are a (p, q) pair)
_TAGS = {
    "GL_R": ("GL", 1, False),
    "GL_H": ("GL", 1, False),
    "U": ("GL", 2, True),
    "SL_R": ("SL", 1, False),
    "SL_H": ("SL", 1, False),
    "SU": ("SL", 2, True),
    "Sp_R": ("Sp", 1, False),
    "Sp_pq": ("Sp", 2, True),
    "O_pq_copy": ("O", 2, True),
    "SO_pq_copy": ("SO", 2, True),
    "O_H": ("O", 1, False),
    "SO_H": ("SO", 1, False),
    "SO_H_minus": ("SO", 1, False),
}
TAG_NAMES = tuple(_TAGS)
_ALIASES = {"Sp": "Sp_pq", "O_pq": "O_pq_copy", "SO_pq": "SO_pq_copy", "SO_minus": "SO_H_minus"}

_DISPLAY = {
    "GL_R": "GL({0},R)",
    "GL_H": "GL({0},H)",
    "U": "U({0},{1})",
    "SL_R": "SL({0},R)",
    "SL_H": "SL({0},H)",
    "SU": "SU({0},{1})",
    "Sp_R": "Sp({0},R)",
    "Sp_pq": "Sp({0},{1})",
    "O_pq_copy": "O_copy({0},{1})",
    "SO_pq_copy": "SO_copy({0},{1})",
    "O_H": "O({0},H)",
    "SO_H": "SO({0},H)",
    "SO_H_minus": "SO-({0},H)",
}


@dataclass(frozen=True)
class RealFormTag:
    """A row of the real-form table with its parameters.

    Parameters follow the usual display conventions: ``GL_H(m)`` lives in
    ``GL(2m, C)``; ``Sp_R(2n)`` and ``Sp_pq(2p, 2q)`` carry matrix sizes;
    ``O_H(m)``, ``SO_H(m)`` and ``SO_H_minus(m)`` live in dimension ``2m``.
    Signature pairs are normalized to ``p >= q``.
    """

    name: str
    params: tuple

    def __post_init__(self):
        if self.name not in _TAGS:
            raise ParameterError(f"unknown real form {self.name!r}")
        _, nparams, pair = _TAGS[self.name]
        params = tuple(int(x) for x in self.params)
        if len(params) != nparams or any(x < 0 for x in params):
            raise ParameterError(f"{self.name} takes {nparams} non-negative parameter(s), got {self.params}")
        if pair:
            p, q = params
            if p < q:
                params = (q, p)
            if p + q < 1:
                raise ParameterError(f"{self.name}{params}: empty signature")
        elif params[0] < 1:
            raise ParameterError(f"{self.name}{params}: parameter must be positive")
        if self.name == "Sp_R" and params[0] % 2:
            raise ParameterError("Sp_R(2n) needs an even matrix size")
        if self.name == "Sp_pq" and (params[0] % 2 or params[1] % 2):
            raise ParameterError("Sp_pq(2p, 2q) needs even parameters")
        if self.name == "SO_H_minus" and params[0] % 2:
            raise ParameterError("SO_H_minus(m) needs m even (ambient dimension 4k)")
        object.__setattr__(self, "params", params)

    @property
    def ambient(self) -> GroupKind:
        kind, _, pair = _TAGS[self.name]
        if pair:
            n = sum(self.params)
        elif self.name in ("GL_H", "SL_H", "O_H", "SO_H", "SO_H_minus"):
            n = 2 * self.params[0]
        else:
            n = self.params[0]
        return GroupKind(kind, n)

    @property
    def pq(self):
        """Signature pair for the (p, q) families; ``Sp_pq`` returns half sizes."""
        if self.name == "Sp_pq":
            return mc.Signature(self.params[0] // 2, self.params[1] // 2)
        if _TAGS[self.name][2]:
            return mc.Signature(*self.params)
        return None

    def __str__(self):
        return _DISPLAY[self.name].format(*self.params)

    @property
    def key(self):
        return f"{self.name}({','.join(map(str, self.params))})"

    @classmethod
    def parse(cls, text):
        """Parse ``NAME(a[,b])`` where ``NAME`` is one of :data:`TAG_NAMES`."""
        m = re.fullmatch(r"\s*([A-Za-z_]+)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*", text)
        name = _ALIASES.get(m.group(1), m.group(1)) if m else None
        if name not in _TAGS:
            raise ParameterError(f"cannot parse real form {text!r}; expected e.g. 'SU(2,0)' or 'Sp_pq(2,2)'")
        params = [int(m.group(2))] + ([int(m.group(3))] if m.group(3) else [])
        return cls(name, tuple(params))

    def to_dict(self):
        return {"tag": self.name, "params": list(self.params)}


def P0(n):
    """The fixed determinant -1 orthogonal matrix ``diag(1, ..., 1, -1)``."""
    return np.diag(np.r_[np.ones(n - 1), -1.0]).astype(complex)


@dataclass
class Residual:
    name: str
    value: float
    scale: float
    bound: float

    @property
    def passed(self):
        return bool(self.value <= self.bound)

    @property
    def relative(self):
        return self.value / self.scale if self.scale > 0 else self.value

    def to_dict(self):
        return {
            "equation": self.name,
            "residual": self.value,
            "relative": self.relative,
            "bound": self.bound,
            "pass": self.passed,
        }


@dataclass
class MembershipReport:
    target: str
    residuals: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.residuals)

    @property
    def max_relative(self):
        return max((r.relative for r in self.residuals), default=0.0)

    def to_dict(self):
        return {
            "target": self.target,
            "pass": self.passed,
            "max_relative": self.max_relative,
            "equations": [r.to_dict() for r in self.residuals],
        }


def _res(name, diff, scale, tol):
    v = mc.fro(diff) if np.ndim(diff) else abs(diff)
    return Residual(name, float(v), float(scale), tol.bound(scale))


def _kind_equations(M, kind, tol):
    n = M.shape[0]
    nrm2 = max(mc.fro(M) ** 2, 1.0)
    out = []
    s = np.linalg.svd(M, compute_uv=False)
    # invertibility: record 1/cond against the float floor
    out.append(Residual("invertible", float(s[-1] <= tol.abs * max(s[0], 1.0)), 1.0, 0.5))
    if kind in ("O", "SO"):
        out.append(_res("M^T M = I", M.T @ M - np.eye(n), nrm2, tol))
    if kind == "Sp":
        Jn = mc.J(n // 2)
        out.append(_res("M^T J M = J", M.T @ Jn @ M - Jn, nrm2, tol))
    if kind in ("SL", "SO", "Sp"):
        out.append(_res("det M = 1", np.linalg.det(M) - 1.0, float(n), tol))
    return out


def _tag_equations(M, tag, tol):
    n = M.shape[0]
    amb = tag.ambient
    out = _kind_equations(M, amb.name, tol)
    nrm = max(mc.fro(M), 1.0)
    nrm2 = nrm * nrm
    name = tag.name
    if name in ("GL_R", "SL_R", "Sp_R"):
        out.append(_res("Im M = 0", M.imag, nrm, tol))
    elif name in ("GL_H", "SL_H"):
        Jn = mc.J(n // 2)
        out.append(_res("M J = J conj(M)", M @ Jn - Jn @ M.conj(), nrm, tol))
    elif name in ("U", "SU"):
        I = mc.Ipq(*tag.params)
        out.append(_res("M* I_pq M = I_pq", M.conj().T @ I @ M - I, nrm2, tol))
    elif name == "Sp_pq":
        K = mc.Kpq(*tag.pq)
        out.append(_res("M* K_pq M = K_pq", M.conj().T @ K @ M - K, nrm2, tol))
    elif name in ("O_pq_copy", "SO_pq_copy"):
        D = mc.Dpq(*tag.params)
        out.append(_res("Im(D^-1 M D) = 0", (np.linalg.solve(D, M) @ D).imag, nrm, tol))
    elif name in ("O_H", "SO_H"):
        Jn = mc.J(n // 2)
        out.append(_res("J M = conj(M) J", Jn @ M - M.conj() @ Jn, nrm, tol))
    elif name == "SO_H_minus":
        Jn = mc.J(n // 2)
        Q = P0(n)
        Mc = Q @ M @ Q  # P0 is an involution
        out.append(_res("J M' = conj(M') J, M' = P0^-1 M P0", Jn @ Mc - Mc.conj() @ Jn, nrm, tol))
    return out


def parse_target(target, n=None):
    """Accept a :class:`GroupKind`, a :class:`RealFormTag`, or a string (kind name or tag)."""
    if isinstance(target, (GroupKind, RealFormTag)):
        return target
    if isinstance(target, str):
        if target in GROUP_KINDS:
            if n is None:
                raise ParameterError("a bare group kind needs a dimension")
            return GroupKind(target, n)
        return RealFormTag.parse(target)
    raise ParameterError(f"cannot interpret membership target {target!r}")


def validate_membership(M, target, tol: Tolerance = DEFAULT_TOL) -> MembershipReport:
    """Residuals of every defining equation of ``target`` evaluated at ``M``."""
    M = mc.as_matrix(M, "M")
    target = parse_target(target, M.shape[0])
    amb = target if isinstance(target, GroupKind) else target.ambient
    if amb.n != M.shape[0]:
        raise ParameterError(f"matrix size {M.shape[0]} does not match {target} (dimension {amb.n})")
    if isinstance(target, GroupKind):
        eqs = _kind_equations(M, target.name, tol)
        label = str(target)
    else:
        eqs = _tag_equations(M, target, tol)
        label = str(target)
    return MembershipReport(label, eqs)


def evaluate_word(generators, word, inverses=None):
    """Product ``rho(w)`` for a word of signed 1-based generator indices."""
    n = generators[0].shape[0]
    out = np.eye(n, dtype=complex)
    for letter in word:
        i = abs(int(letter)) - 1
        if letter > 0:
            out = out @ generators[i]
        else:
            inv = inverses[i] if inverses is not None else np.linalg.inv(generators[i])
            out = out @ inv
    return out


class Representation:
    """A point of ``Hom(F_s, G)``: an ambient group kind and ordered generator images.

    Generators are validated against the ambient group at construction unless
    ``validate=False``.  Relations, when given, are stored and can be checked with
    :meth:`relation_residuals` but are never enforced.
    """

    def __init__(self, kind, generators, labels=None, relations=None, tol=DEFAULT_TOL, validate=True):
        if not isinstance(kind, GroupKind):
            raise ParameterError(f"kind must be a GroupKind, got {kind!r}")
        gens = tuple(mc.as_matrix(g, f"generator {i}") for i, g in enumerate(generators))
        if not gens:
            raise ParameterError("a representation needs at least one generator")
        for i, g in enumerate(gens):
            if g.shape[0] != kind.n:
                raise ParameterError(f"generator {i} has size {g.shape[0]}, expected {kind.n}")
        if labels is not None and len(labels) != len(gens):
            raise ParameterError("labels must match the number of generators")
        self.kind = kind
        self.generators = gens
        self.labels = list(labels) if labels is not None else None
        self.relations = [list(map(int, r)) for r in relations] if relations else []
        for r in self.relations:
            for letter in r:
                if letter == 0 or abs(letter) > len(gens):
                    raise ParameterError(f"relation letter {letter} out of range")
        if validate:
            for i, g in enumerate(gens):
                rep = validate_membership(g, kind, tol)
                if not rep.passed:
                    bad = [r.name for r in rep.residuals if not r.passed]
                    raise ValidationError(f"generator {i} is not in {kind}: failed {bad}")

    @property
    def n(self):
        return self.kind.n

    @property
    def num_generators(self):
        return len(self.generators)

    def inverses(self):
        return tuple(np.linalg.inv(g) for g in self.generators)

    def word(self, w):
        return evaluate_word(self.generators, w, self.inverses())

    def conjugate(self, P, kind=None, validate=False):
        """The representation ``g -> P g P^-1``."""
        P = mc.as_matrix(P, "P")
        Pinv = np.linalg.inv(P)
        return Representation(
            kind or self.kind,
            [P @ g @ Pinv for g in self.generators],
            self.labels,
            self.relations,
            validate=validate,
        )

    def with_generators(self, gens, kind=None):
        return Representation(kind or self.kind, gens, self.labels, self.relations, validate=False)

    def relation_residuals(self):
        inv = self.inverses()
        I = np.eye(self.n)
        return [mc.fro(evaluate_word(self.generators, r, inv) - I) for r in self.relations]

    def __repr__(self):
        return f"Representation({self.kind}, {self.num_generators} generators)"


# --- JSON -------------------------------------------------------------------------


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in M.ravel()]


def matrix_from_json(data, n, pointer):
    if not isinstance(data, list):
        raise ParseError("expected a list of [re, im] pairs", pointer)
    if len(data) != n * n:
        raise ParseError(f"expected {n * n} entries, got {len(data)}", pointer)
    vals = np.empty(n * n, dtype=complex)
    for k, pair in enumerate(data):
        ptr = f"{pointer}/{k}"
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError("expected a [re, im] pair", ptr)
        for x in pair:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError("expected a number", ptr)
        vals[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(vals)):
        raise ParseError("non-finite entry", pointer)
    return vals.reshape(n, n)


def representation_to_dict(rep: Representation):
    doc = {
        "kind": rep.kind.name,
        "n": rep.n,
        "generators": [matrix_to_json(g) for g in rep.generators],
    }
    if rep.labels is not None:
        doc["labels"] = list(rep.labels)
    if rep.relations:
        doc["relations"] = [list(r) for r in rep.relations]
    return doc


def representation_from_dict(doc, tol=DEFAULT_TOL, validate=True):
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    extra = set(doc) - {"kind", "n", "generators", "labels", "relations"}
    if extra:
        raise ParseError(f"unexpected keys {sorted(extra)}")
    kind = doc.get("kind")
    if kind not in GROUP_KINDS:
        raise ParseError(f"kind must be one of {list(GROUP_KINDS)}", "/kind")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError("n must be a positive integer", "/n")
    if kind == "Sp" and n % 2:
        raise ParseError("Sp needs an even dimension", "/n")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ParseError("generators must be a non-empty list", "/generators")
    mats = [matrix_from_json(g, n, f"/generators/{i}") for i, g in enumerate(gens)]
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise ParseError("labels must be a list of strings", "/labels")
        if len(labels) != len(mats):
            raise ParseError("labels must match the number of generators", "/labels")
    rels = doc.get("relations")
    if rels is not None:
        if not isinstance(rels, list):
            raise ParseError("relations must be a list", "/relations")
        for i, r in enumerate(rels):
            ok = isinstance(r, list) and all(
                isinstance(x, int) and not isinstance(x, bool) and 0 < abs(x) <= len(mats) for x in r
            )
            if not ok:
                raise ParseError("relation must list signed 1-based generator indices", f"/relations/{i}")
    return Representation(GroupKind(kind, n), mats, labels, rels, tol=tol, validate=validate)


def _reject_constant(name):
    raise ParseError(f"non-finite token {name} is not allowed")


def load_representation(document, tol=DEFAULT_TOL, validate=True):
    """Parse a UTF-8 JSON document (bytes or str) into a :class:`Representation`."""
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"not UTF-8: {e}") from None
    try:
        doc = json.loads(document, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    return representation_from_dict(doc, tol=tol, validate=validate)


def save_representation(rep: Representation) -> bytes:
    return json.dumps(representation_to_dict(rep), allow_nan=False).encode("utf-8")
