"""Command-line interface.

Every subcommand writes one JSON document to stdout (JSON lines for
``roundtrip``) and reports failures as a JSON object on stderr.  Exit codes:
0 success, 2 invalid input, 3 precondition not met, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import decomp
from .classifier import classify_irreducible
from .errors import InputError, ParameterError, ParseError, RealFormError
from .grouprep import (
    GROUP_KINDS,
    GroupKind,
    RealFormTag,
    load_representation,
    matrix_from_json,
    matrix_to_json,
    validate_membership,
)
from .harness import roundtrip_trial
from .invariants import DEFAULT_WORD_CAP, trace_coordinates
from .matcore import DEFAULT_TOL, Tolerance
from .reducible import classify_semisimple

__all__ = ["main", "resolve_tolerance", "run"]

TOL_ENV = "REALFORM_TOL"
DECOMPOSE_OPS = ("polar", "sympeig", "kpq", "antisymp", "antiorth", "hilbert90")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(f"usage: {message}")


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(x) or x <= 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text!r}")
    return x


def resolve_tolerance(flag=None, environ=None):
    """``--tol`` wins over ``REALFORM_TOL``; both set the relative part only."""
    environ = os.environ if environ is None else environ
    if flag is not None:
        return Tolerance(rel=flag, abs=DEFAULT_TOL.abs)
    env = environ.get(TOL_ENV)
    if env:
        try:
            return Tolerance(rel=_positive_float(env), abs=DEFAULT_TOL.abs)
        except argparse.ArgumentTypeError as e:
            raise ParameterError(f"{TOL_ENV}: {e}") from None
    return DEFAULT_TOL


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_rep(path, tol):
    return load_representation(_read(path), tol=tol)


def _load_matrix(path):
    try:
        doc = json.loads(_read(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError("n must be a positive integer", "/n")
    M = matrix_from_json(doc.get("matrix"), n, "/matrix")
    kind = doc.get("kind", "GL")
    if kind not in GROUP_KINDS:
        raise ParseError(f"kind must be one of {list(GROUP_KINDS)}", "/kind")
    try:
        gk = GroupKind(kind, n)
    except ParameterError as e:
        raise ParseError(str(e), "/kind") from None
    return M, gk


def _cmd_classify(args, tol):
    rep = _load_rep(args.rep, tol)
    if args.reducible:
        cert = classify_semisimple(rep, args.involution, tol, seed=args.seed)
    else:
        cert = classify_irreducible(rep, args.involution, tol, seed=args.seed)
    return cert.to_dict()


def _cmd_coords(args, tol):
    rep = _load_rep(args.rep, tol)
    if args.max_word_len < 1:
        raise ParameterError("--max-word-len must be at least 1")
    return trace_coordinates(rep, cap=args.max_word_len).to_dict()


def _cmd_check(args, tol):
    rep = _load_rep(args.rep, tol)
    target = args.target
    target = GroupKind(target, rep.n) if target in GROUP_KINDS else RealFormTag.parse(target)
    reports = [validate_membership(g, target, tol) for g in rep.generators]
    out = {
        "target": str(target),
        "pass": all(r.passed for r in reports),
        "generators": [r.to_dict() for r in reports],
    }
    rel = rep.relation_residuals()
    if rel:
        out["relations"] = rel
    return out


def _cmd_decompose(args, tol):
    M, kind = _load_matrix(args.matrix)
    op = args.op
    if op == "polar":
        U, H = decomp.polar_in_group(M, kind, tol)
        return {"op": op, "U": matrix_to_json(U), "H": matrix_to_json(H)}
    if op == "sympeig":
        V, D = decomp.symplectic_eig(M, tol)
        return {"op": op, "V": matrix_to_json(V), "D": matrix_to_json(D)}
    if op == "kpq":
        S, sig = decomp.reduce_to_Kpq(M, tol)
        return {"op": op, "S": matrix_to_json(S), "signature": list(sig)}
    if op == "antisymp":
        return {"op": op, "S": matrix_to_json(decomp.antisymplectic_reduce(M, tol))}
    if op == "antiorth":
        return {"op": op, "M": matrix_to_json(decomp.antiorthogonal_reduce(M, tol))}
    Q, cond = decomp.hilbert90(M, tol)
    return {"op": op, "Q": matrix_to_json(Q), "condition_number": cond}


def _trial_seed(seed, index):
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0] >> 1)


def _one_trial(job):
    tag_key, generators, seed, rel = job
    tol = Tolerance(rel=rel, abs=DEFAULT_TOL.abs) if rel is not None else None
    kwargs = {"tol": tol} if tol is not None else {}
    return roundtrip_trial(RealFormTag.parse(tag_key), generators, seed, **kwargs).to_dict()


def _cmd_roundtrip(args, tol, out):
    tag = RealFormTag.parse(args.tag)
    if args.trials < 0 or args.jobs < 1 or args.generators < 1:
        raise ParameterError("--trials must be >= 0, --jobs and --generators >= 1")
    rel = args.tol
    jobs = [(tag.key, args.generators, _trial_seed(args.seed, i), rel) for i in range(args.trials)]
    if args.jobs == 1:
        results = map(_one_trial, jobs)
        for r in results:
            out.write(json.dumps(r) + "\n")
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for r in pool.map(_one_trial, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))):
                out.write(json.dumps(r) + "\n")


def build_parser():
    p = _Parser(
        prog="realforms", description="Real-form classification of representations into classical groups."
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument(
            "--tol", type=_positive_float, default=None, help="relative tolerance (abs fixed at 1e-12)"
        )

    c = sub.add_parser("classify", help="conjugate a Phi-fixed representation into a real form")
    c.add_argument("rep")
    c.add_argument("--involution", choices=["phi1", "phi2"], type=str.lower, required=True)
    c.add_argument("--reducible", action="store_true", help="semi-simple GL/SL input (block decomposition)")
    c.add_argument("--seed", type=int, default=0)
    common(c)

    k = sub.add_parser("coords", help="trace coordinates (and Q values for even SO)")
    k.add_argument("rep")
    k.add_argument("--max-word-len", type=int, default=DEFAULT_WORD_CAP)
    common(k)

    ch = sub.add_parser("check", help="membership residuals of each generator")
    ch.add_argument("rep")
    ch.add_argument("--target", required=True, help="group kind (GL, SL, O, SO, Sp) or tag such as 'SU(2,0)'")
    common(ch)

    d = sub.add_parser("decompose", help="structured decompositions of a single matrix")
    d.add_argument("op", choices=DECOMPOSE_OPS)
    d.add_argument("matrix")
    common(d)

    r = sub.add_parser("roundtrip", help="sample, scramble, classify, verify (JSON lines)")
    r.add_argument("--tag", required=True)
    r.add_argument("--trials", type=int, default=10)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--generators", type=int, default=2)
    common(r)
    return p


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        tol = resolve_tolerance(args.tol)
        if args.command == "roundtrip":
            if args.tol is None and os.environ.get(TOL_ENV):
                args.tol = tol.rel
            _cmd_roundtrip(args, tol, stdout)
            return 0
        handler = {
            "classify": _cmd_classify,
            "coords": _cmd_coords,
            "check": _cmd_check,
            "decompose": _cmd_decompose,
        }[args.command]
        doc = handler(args, tol)
        stdout.write(json.dumps(doc) + "\n")
        return 0
    except RealFormError as e:
        stderr.write(json.dumps(e.to_dict()) + "\n")
        return e.exit_code
    except SystemExit as e:  # --help
        return int(e.code or 0)


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
