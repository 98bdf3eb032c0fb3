"""Command-line front end.

Every command prints a single JSON document (default) or an aligned table.
All rationals are serialized as "p/q" strings, keys are sorted, and output
is byte-deterministic for identical requests. Exit codes: 0 success, 1
domain precondition failure (the error is serialized as
{"error": {"kind": ..., "detail": ...}}), 2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from . import gkz, hodge, hyper, ore, rescale, verify
from .errors import DomainError, ParseError
from .exact import IntMat

VERIFY_BOUND_ENV = "HYPERHODGE_VERIFY_BOUND"


@dataclass(frozen=True)
class Request:
    command: str
    options: dict


def _rat(x) -> str:
    return str(Fraction(x))


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _rat(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(payload), sort_keys=True)
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        elif isinstance(value, (list, tuple)):
            if all(not isinstance(v, (dict, list, tuple)) for v in value):
                lines.append(f"{prefix}: " + " ".join(str(_jsonable(v)) for v in value))
            else:
                for i, v in enumerate(value):
                    walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}: {_jsonable(value)}")

    walk("", payload)
    return "\n".join(lines)


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {text!r}: {e}")


def _parse_matrix(text: str) -> IntMat:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"matrix is not valid JSON: {e}")
    if (not isinstance(data, list) or not data
            or not all(isinstance(r, list) and r for r in data)
            or not all(isinstance(x, int) and not isinstance(x, bool)
                       for r in data for x in r)
            or len({len(r) for r in data}) != 1):
        raise ParseError("matrix must be a nonempty JSON array of equal-length "
                         "integer rows")
    return IntMat.from_rows(data, cols=len(data[0]))


def _spectrum_payload(spec: hodge.HodgeSpectrum) -> dict:
    return {
        "rank": spec.rank,
        "normalization": spec.normalization_note,
        "jumps": [{"value": _rat(v), "multiplicity": m} for v, m in spec.jumps],
    }


def _cmd_hyper_invariants(opts: dict) -> tuple:
    p = hyper.parse_params(opts["params"])
    prof = hyper.singularity_profile(p)
    payload = {
        "alpha": [_rat(a) for a in p.alpha],
        "beta": [_rat(b) for b in p.beta],
        "type": [p.n, p.m],
        "irreducible": hyper.is_irreducible(p),
        "regular_points": sorted(prof.regular_points),
        "irregular_point": prof.irregular_point,
        "slope": _rat(prof.slope) if prof.slope is not None else None,
        "slope_multiplicity": prof.slope_multiplicity,
        "irregularity": prof.irregularity,
        "euler_characteristic": prof.euler_characteristic,
        "operator": ore.format_op(hyper.hypergeometric_operator(p)),
    }
    return 0, payload


def _cmd_hodge_regular(opts: dict) -> tuple:
    p = hyper.parse_params(opts["params"])
    return 0, _spectrum_payload(hodge.fedorov_numbers(p))


def _cmd_hodge_irregular(opts: dict) -> tuple:
    p = hyper.parse_params(opts["params"])
    return 0, _spectrum_payload(hodge.irregular_hodge_numbers(p))


def _cmd_filtration(opts: dict) -> tuple:
    p = hyper.parse_params(opts["params"])
    steps = hodge.irregular_filtration(p, window=opts["window"])
    jumps = hodge.unnormalized_jumps(p)
    counts: dict = {}
    for j in jumps:
        counts[j] = counts.get(j, 0) + 1
    payload = {
        "rank": p.n,
        "normalization": "unnormalized",
        "shift": _rat(hodge.filtration_shift(p)),
        "jumps": [{"value": _rat(v), "multiplicity": counts[v]}
                  for v in sorted(counts)],
        "filtration": [{"level": _rat(s.level), "basis": list(s.basis_indices)}
                       for s in steps],
        "qbar": [ore.format_op(q) for q in hodge.qbar_operators(p)],
    }
    return 0, payload


def _cmd_gkz_check(opts: dict) -> tuple:
    report = gkz.check_assumptions(_parse_matrix(opts["matrix"]))
    payload = {
        "lattice_full": report.lattice_full,
        "face_condition": report.face_condition,
        "origin_interior": report.origin_interior,
        "passed": report.passed,
        "failing_face": list(report.failing_face) if report.failing_face else None,
        "note": report.note,
    }
    return 0, payload


def _cmd_gkz_volume(opts: dict) -> tuple:
    a = _parse_matrix(opts["matrix"])
    vol = gkz.normalized_volume(a)
    payload = {
        "dim": a.rows,
        "normalized_volume": _rat(vol),
        "euclidean_volume": _rat(vol / math.factorial(a.rows)),
    }
    return 0, payload


def _cmd_gkz_reduce(opts: dict) -> tuple:
    if opts.get("params"):
        p = hyper.parse_params(opts["params"])
        sysm = gkz.matrix_for_hyper(p)
    elif opts.get("matrix"):
        try:
            raw = json.loads(opts.get("beta") or "[]")
        except json.JSONDecodeError as e:
            raise ParseError(f"beta is not valid JSON: {e}")
        if not isinstance(raw, list):
            raise ParseError("beta must be a JSON array of rational strings")
        beta = [_parse_fraction(str(x)) for x in raw]
        sysm = gkz.GkzSystem(_parse_matrix(opts["matrix"]), beta)
    else:
        raise ParseError("give either parameters or --matrix/--beta")
    res = gkz.reduce_to_hyper(sysm)
    payload = {
        "p": ore.format_op(res.p_op),
        "h": ore.format_op(res.h_op),
        "applied_sign": str(res.applied_sign),
        "alpha": [_rat(a) for a in res.params.alpha],
        "beta": [_rat(b) for b in res.params.beta],
    }
    return 0, payload


def _require_irregular(p) -> rescale.IrregularContext:
    if p.m != 0:
        raise DomainError("beta must be empty for the rescaled module")
    return rescale.IrregularContext(p.alpha)


def _cmd_rescale_connection(opts: dict) -> tuple:
    ctx = _require_irregular(hyper.parse_params(opts["params"]))
    mats = rescale.connection_matrices(ctx)
    verified = None
    if ctx.n <= opts["bound"]:
        verified = rescale.verify_connection(ctx, bound=opts["bound"])
    payload = {
        "n": ctx.n,
        "gamma": _rat(ctx.gamma),
        "a0": [[str(e) for e in row] for row in mats.a0],
        "ainf_prime": [[str(e) for e in row] for row in mats.ainf_prime],
        "ainf": [[str(e) for e in row] for row in mats.ainf],
        "verified": verified,
    }
    return 0, payload


def _cmd_rescale_vfilt(opts: dict) -> tuple:
    ctx = _require_irregular(hyper.parse_params(opts["params"]))
    x = _parse_fraction(opts["index"])
    step = rescale.v_step(ctx, x)
    piece = rescale.graded_piece(ctx, x)
    payload = {
        "index": _rat(x),
        "nu": list(step.nu),
        "contributing": list(piece.contributing_indices),
        "nilpotent": [list(r) for r in piece.nilpotent],
        "jordan_blocks": list(rescale.jordan_block_sizes(ctx, piece)),
    }
    return 0, payload


def _cmd_verify(opts: dict) -> tuple:
    bound = opts["bound"]
    cap = os.environ.get(VERIFY_BOUND_ENV)
    if cap:
        try:
            bound = min(bound, int(cap))
        except ValueError:
            raise ParseError(f"{VERIFY_BOUND_ENV} must be an integer, got {cap!r}")
    results = verify.run_checks(bound=max(bound, 1), seed=opts["seed"])
    payload = {
        "checks": [{"name": r.name, "ok": r.ok, "detail": r.detail}
                   for r in results],
        "passed": all(r.ok for r in results),
    }
    return (0 if payload["passed"] else 1), payload


_DISPATCH = {
    "hyper-invariants": _cmd_hyper_invariants,
    "hodge-regular": _cmd_hodge_regular,
    "hodge-irregular": _cmd_hodge_irregular,
    "filtration": _cmd_filtration,
    "gkz-check": _cmd_gkz_check,
    "gkz-reduce": _cmd_gkz_reduce,
    "gkz-volume": _cmd_gkz_volume,
    "rescale-connection": _cmd_rescale_connection,
    "rescale-vfilt": _cmd_rescale_vfilt,
    "verify": _cmd_verify,
}


def run(request: Request) -> tuple:
    """Dispatch a request; returns (exit_code, output_text)."""
    fmt = request.options.get("format", "json")
    try:
        code, payload = _DISPATCH[request.command](request.options)
    except ParseError as e:
        return 2, _emit({"error": {"kind": e.kind, "detail": e.detail}}, fmt)
    except DomainError as e:
        return 1, _emit({"error": {"kind": e.kind, "detail": e.detail}}, fmt)
    return code, _emit(payload, fmt)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hyperhodge",
        description="Exact invariants of hypergeometric differential systems")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, help_text, params=False, matrix=False):
        p = sub.add_parser(name, help=help_text)
        if params:
            p.add_argument("params",
                           help="parameters 'a1,a2,...;b1,b2,...' (semicolon required)")
        if matrix:
            p.add_argument("--matrix", required=True,
                           help="JSON array of integer rows")
        p.add_argument("--format", choices=("json", "table"), default="json")
        return p

    add("hyper-invariants", "irreducibility and singularity profile", params=True)
    add("hodge-regular", "shift-free Hodge numbers, type (n,n)", params=True)
    add("hodge-irregular", "normalized irregular Hodge spectrum, type (n,0)",
        params=True)
    p = add("filtration", "irregular Hodge filtration steps", params=True)
    p.add_argument("--window", type=int, default=2,
                   help="unit intervals of levels to emit (default 2)")
    add("gkz-check", "admissibility checks for an integer matrix", matrix=True)
    add("gkz-volume", "normalized volume of the column hull", matrix=True)
    p = sub.add_parser("gkz-reduce",
                       help="reduce a block-shaped system to the classical pair")
    p.add_argument("params", nargs="?", default=None,
                   help="parameters 'a1,...;b1,...' (alpha_1 must be 0)")
    p.add_argument("--matrix", help="JSON array of integer rows")
    p.add_argument("--beta", help="JSON array of rational strings")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p = add("rescale-connection", "closed-form connection matrices", params=True)
    p.add_argument("--bound", type=int, default=6,
                   help="verify the matrices against the ideal up to this rank")
    p = add("rescale-vfilt", "V-filtration step and graded piece", params=True)
    p.add_argument("--index", required=True, help="filtration index p/q")
    p = sub.add_parser("verify", help="run the named invariant checks")
    p.add_argument("--bound", type=int, default=4, help="size bound for checks")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--format", choices=("json", "table"), default="json")
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if k != "command"}
    code, text = run(Request(command=args.command, options=options))
    print(text)
    return code


def entry_point() -> None:
    raise SystemExit(main())
