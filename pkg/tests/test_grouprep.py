import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realforms import matcore as mc
from realforms.errors import ParameterError, ParseError, ValidationError
from realforms.grouprep import (
    TAG_NAMES,
    GroupKind,
    RealFormTag,
    Representation,
    evaluate_word,
    load_representation,
    save_representation,
    validate_membership,
)
from realforms.harness import acceptance_tags, sample_real_form


def test_group_kind_rules():
    assert str(GroupKind("Sp", 4)) == "Sp(4,C)"
    with pytest.raises(ParameterError):
        GroupKind("Sp", 3)
    with pytest.raises(ParameterError):
        GroupKind("XL", 2)
    with pytest.raises(ParameterError):
        GroupKind("GL", 0)


def test_tag_normalization_and_parse():
    t = RealFormTag("U", (1, 3))
    assert t.params == (3, 1)
    assert t.ambient == GroupKind("GL", 4)
    assert RealFormTag.parse("SU(0,2)") == RealFormTag("SU", (2, 0))
    assert RealFormTag.parse("Sp(2,2)") == RealFormTag("Sp_pq", (2, 2))
    assert RealFormTag.parse("Sp_pq(2,2)").pq == (1, 1)
    assert RealFormTag.parse("SO_minus(2)").ambient == GroupKind("SO", 4)
    assert RealFormTag("GL_H", (3,)).ambient == GroupKind("GL", 6)
    assert RealFormTag("Sp_R", (4,)).ambient == GroupKind("Sp", 4)
    assert RealFormTag.parse(RealFormTag("O_pq_copy", (2, 1)).key) == RealFormTag("O_pq_copy", (2, 1))
    assert set(TAG_NAMES) >= {"GL_R", "SO_H_minus", "Sp_pq"}


@pytest.mark.parametrize(
    "name,params",
    [("Sp_R", (3,)), ("Sp_pq", (1, 2)), ("SO_H_minus", (3,)), ("U", (0, 0)), ("GL_R", (1, 2)), ("Foo", (1,))],
)
def test_tag_invalid(name, params):
    with pytest.raises(ParameterError):
        RealFormTag(name, params)


def test_tag_parse_garbage():
    with pytest.raises(ParameterError):
        RealFormTag.parse("SU[2]")


def test_membership_examples():
    assert validate_membership(mc.J(1), GroupKind("Sp", 2)).passed
    assert validate_membership(np.diag([2, 0.5]), GroupKind("SL", 2)).passed
    assert not validate_membership(np.diag([2.0, 3.0]), GroupKind("Sp", 2)).passed
    with pytest.raises(ParameterError):
        validate_membership(np.eye(3), GroupKind("GL", 2))


def test_membership_report_fields():
    rep = validate_membership(np.diag([2.0, 3.0]), RealFormTag("SL_R", (2,)))
    d = rep.to_dict()
    assert d["pass"] is False
    failed = [r.name for r in rep.residuals if not r.passed]
    assert failed == ["det M = 1"]


def test_membership_singular_fails():
    assert not validate_membership(np.zeros((2, 2)), GroupKind("GL", 2)).passed


def test_membership_tag_examples():
    theta = 0.3
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    assert validate_membership(rot, RealFormTag("SO_pq_copy", (2, 0))).passed
    assert not validate_membership(rot, RealFormTag("SO_pq_copy", (1, 1))).passed
    boost = np.array([[np.cosh(theta), np.sinh(theta)], [np.sinh(theta), np.cosh(theta)]])
    assert validate_membership(boost, RealFormTag("SU", (1, 1))).passed
    # the O(1,1) boost moved into the copy by D_{1,1}
    D = mc.Dpq(1, 1)
    assert validate_membership(D @ boost @ np.linalg.inv(D), RealFormTag("SO_pq_copy", (1, 1))).passed
    q = np.array([[1 + 1j, -2], [2, 1 - 1j]]) / np.sqrt(6)
    assert validate_membership(q, RealFormTag("SL_H", (1,))).passed
    assert validate_membership(q, RealFormTag("SU", (2, 0))).passed


@pytest.mark.parametrize(
    "tag", acceptance_tags() + [RealFormTag("SO_pq_copy", (1, 1)), RealFormTag("O_H", (1,))]
)
def test_samples_pass_membership(tag):
    for seed in range(5):
        rep = sample_real_form(tag, 2, seed)
        for g in rep.generators:
            r = validate_membership(g, tag, mc.Tolerance(rel=1e-10))
            assert r.passed, (tag, r.to_dict())


def test_gl_h_membership_implies_positive_det():
    rng = np.random.default_rng(5)
    for m in (1, 2, 3):
        tag = RealFormTag("GL_H", (m,))
        for _ in range(30):
            A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            B = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            M = np.block([[A, -B.conj()], [B, A.conj()]])
            assert validate_membership(M, tag).passed
            d = np.linalg.det(M)
            assert abs(d.imag) <= 1e-8 * abs(d) and d.real > 0


def test_evaluate_word():
    a = np.diag([2.0, 0.5]).astype(complex)
    b = np.array([[1, 1], [0, 1]], dtype=complex)
    assert np.allclose(evaluate_word([a, b], ()), np.eye(2))
    assert np.allclose(evaluate_word([a, b], (1, -2)), a @ np.linalg.inv(b))


def test_representation_validation():
    with pytest.raises(ValidationError):
        Representation(GroupKind("SL", 2), [np.diag([2.0, 3.0])])
    with pytest.raises(ParameterError):
        Representation(GroupKind("GL", 2), [])
    with pytest.raises(ParameterError):
        Representation(GroupKind("GL", 2), [np.eye(3)])
    rep = Representation(GroupKind("GL", 2), [np.eye(2)], relations=[[1, 1, -1, -1]])
    assert rep.relation_residuals()


def test_load_minimal():
    rep = load_representation(b'{"kind": "GL", "n": 1, "generators": [[[2, 0]]]}')
    assert rep.n == 1 and rep.generators[0][0, 0] == 2


@pytest.mark.parametrize(
    "doc,pointer",
    [
        ({"kind": "Sp", "n": 3, "generators": [[[1, 0]] * 9]}, "/n"),
        ({"kind": "XX", "n": 1, "generators": [[[1, 0]]]}, "/kind"),
        ({"kind": "GL", "n": 1, "generators": []}, "/generators"),
        ({"kind": "GL", "n": 2, "generators": [[[1, 0]] * 3]}, "/generators/0"),
        ({"kind": "GL", "n": 1, "generators": [[[1, "x"]]]}, "/generators/0/0"),
        ({"kind": "GL", "n": 1, "generators": [[[1, 0]]], "labels": ["a", "b"]}, "/labels"),
        ({"kind": "GL", "n": 1, "generators": [[[1, 0]]], "relations": [[2]]}, "/relations/0"),
    ],
)
def test_load_schema_errors(doc, pointer):
    with pytest.raises(ParseError) as e:
        load_representation(json.dumps(doc))
    assert e.value.pointer == pointer
    assert e.value.exit_code == 2


def test_load_rejects_nan_and_garbage():
    with pytest.raises(ParseError):
        load_representation('{"kind": "GL", "n": 1, "generators": [[[NaN, 0]]]}')
    with pytest.raises(ParseError):
        load_representation(b"\xff\xfe")
    with pytest.raises(ParseError):
        load_representation("{not json")


def test_load_membership_failure():
    with pytest.raises(ValidationError):
        load_representation('{"kind": "SL", "n": 1, "generators": [[[2, 0]]]}')


def test_save_load_roundtrip():
    doc = {
        "kind": "SL",
        "n": 2,
        "generators": [[[2.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]], [[0, 1], [0, 0], [0, 0], [0, -1]]],
        "labels": ["a", "b"],
        "relations": [[1, 2, -1, -2]],
    }
    rep = load_representation(json.dumps(doc))
    again = json.loads(save_representation(rep))
    # equal modulo float formatting: json compares 1 == 1.0
    assert again == doc
    assert load_representation(save_representation(rep)).labels == ["a", "b"]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_json_roundtrip_property(n, s, seed):
    rng = np.random.default_rng(seed)
    gens = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) + 3 * np.eye(n) for _ in range(s)]
    rep = Representation(GroupKind("GL", n), gens)
    back = load_representation(save_representation(rep))
    for g, h in zip(rep.generators, back.generators):
        assert np.array_equal(g, h)
