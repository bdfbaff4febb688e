import io
import json
import subprocess
import sys

import numpy as np
import pytest

from realforms.cli import resolve_tolerance, run
from realforms.grouprep import GroupKind, Representation, matrix_to_json, save_representation
from realforms.harness import scramble
from realforms.matcore import DEFAULT_TOL


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def su2_file(tmp_path):
    rng = np.random.default_rng(0)
    rep = Representation(GroupKind("SL", 2), [1j * np.array([[0, 1], [1, 0]]), 1j * np.diag([1, -1])])
    rep, _ = scramble(rep, rng)
    path = tmp_path / "su2_scrambled.json"
    path.write_bytes(save_representation(rep))
    return str(path)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_classify_su2(su2_file):
    code, out, err = call("classify", su2_file, "--involution", "phi2")
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["tag"] == "SU" and doc["params"] == [2, 0]


def test_classify_generic_not_fixed(tmp_path):
    rng = np.random.default_rng(1)
    gens = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) + np.eye(2) for _ in range(2)]
    path = tmp_path / "generic_complex.json"
    path.write_bytes(save_representation(Representation(GroupKind("GL", 2), gens)))
    code, out, err = call("classify", str(path), "--involution", "phi1")
    assert code == 3 and out == ""
    assert json.loads(err)["reason"] == "not phi-fixed"


def test_classify_reducible(tmp_path):
    path = write(
        tmp_path, "r.json", {"kind": "GL", "n": 2, "generators": [matrix_to_json(np.diag([2, 0.5]))]}
    )
    code, out, _ = call("classify", path, "--involution", "phi2", "--reducible")
    assert code == 0 and json.loads(out)["tag"] == "U"


def test_coords_identity(tmp_path):
    path = write(
        tmp_path, "identity_rep.json", {"kind": "GL", "n": 3, "generators": [matrix_to_json(np.eye(3))]}
    )
    code, out, _ = call("coords", path, "--max-word-len", "2")
    doc = json.loads(out)
    assert code == 0
    assert all(pair == [3.0, 0.0] for pair in doc["traces"])


def test_check(su2_file, tmp_path):
    code, out, _ = call("check", su2_file, "--target", "SL")
    assert code == 0 and json.loads(out)["pass"] is True
    code, out, _ = call("check", su2_file, "--target", "SU(2,0)")
    assert code == 0 and json.loads(out)["pass"] is False


def test_decompose_hilbert90(tmp_path):
    path = write(tmp_path, "h.json", {"n": 2, "matrix": matrix_to_json(np.array([[0, 1], [1, 0]]))})
    code, out, _ = call("decompose", "hilbert90", path)
    assert code == 0
    Q = np.array([complex(*z) for z in json.loads(out)["Q"]]).reshape(2, 2)
    assert np.allclose(Q, [[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


def test_decompose_polar_kind(tmp_path):
    path = write(tmp_path, "m.json", {"n": 2, "matrix": matrix_to_json(np.diag([2, 0.5])), "kind": "Sp"})
    code, out, _ = call("decompose", "polar", path)
    assert code == 0 and set(json.loads(out)) == {"op", "U", "H"}
    bad = write(tmp_path, "b.json", {"n": 2, "matrix": matrix_to_json(np.diag([2, 3])), "kind": "Sp"})
    assert call("decompose", "polar", bad)[0] == 4


def test_roundtrip_jsonl_deterministic():
    code, out1, _ = call("roundtrip", "--tag", "SU(2,0)", "--trials", "3", "--seed", "4")
    _, out2, _ = call("roundtrip", "--tag", "SU(2,0)", "--trials", "3", "--seed", "4")
    assert code == 0
    rows1 = [json.loads(line) for line in out1.splitlines()]
    rows2 = [json.loads(line) for line in out2.splitlines()]
    assert len(rows1) == 3 and all(r["pass"] for r in rows1)
    for a, b in zip(rows1, rows2):
        a.pop("elapsed"), b.pop("elapsed")
        assert a == b


def test_roundtrip_parallel_matches_serial():
    _, serial, _ = call("roundtrip", "--tag", "Sp_R(2)", "--trials", "4", "--seed", "2")
    _, par, _ = call("roundtrip", "--tag", "Sp_R(2)", "--trials", "4", "--seed", "2", "--jobs", "2")
    strip = [{k: v for k, v in json.loads(x).items() if k != "elapsed"} for x in serial.splitlines()]
    strip2 = [{k: v for k, v in json.loads(x).items() if k != "elapsed"} for x in par.splitlines()]
    assert strip == strip2


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "/nonexistent.json", "--involution", "phi1"],
        ["classify", "x.json", "--involution", "phi9"],
        ["roundtrip", "--tag", "Nope(2)"],
        ["coords"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == ""
    assert json.loads(err)["exit_code"] == 2


def test_parse_error_pointer(tmp_path):
    path = write(tmp_path, "bad.json", {"kind": "GL", "n": 2, "generators": [[[1, 0]]]})
    code, _, err = call("coords", path)
    assert code == 2 and json.loads(err)["pointer"] == "/generators/0"


def test_tolerance_resolution():
    assert resolve_tolerance(None, {}) == DEFAULT_TOL
    assert resolve_tolerance(None, {"REALFORM_TOL": "1e-6"}).rel == 1e-6
    assert resolve_tolerance(1e-7, {"REALFORM_TOL": "1e-6"}).rel == 1e-7
    assert call("coords", "x.json", "--tol", "-1")[0] == 2


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "i.json", {"kind": "SL", "n": 1, "generators": [[[1, 0]]]})
    proc = subprocess.run(
        [sys.executable, "-m", "realforms", "coords", path], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stderr == ""
    json.loads(proc.stdout)
