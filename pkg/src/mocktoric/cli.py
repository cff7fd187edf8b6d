"""Command-line interface.

Exit codes: 0 success, 1 the mathematics says no (a report is still
written), 2 malformed input, 3 a resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import io
from .arrangement import ArrangementError, bergman_fan, del_pezzo_demo, structure_from_arrangement
from .cone import dual, faces, multiplicity
from .fan import FanError, fan_validate, make_unimodular, shape_predicates, slice_and_project, star_quotient
from .lattice import LatticeError, LatticeMap, quotient_map, smith_normal_form
from .laurent import argmin_support, is_fine_fan, refine_along, val_eval
from .mock import (
    MockStructureError,
    induce_orbit,
    relative_correspondences,
    verify_conditions,
)
from .toroidal import (
    CertifyOptions,
    ResourceGuardError,
    ToroidalError,
    certify,
    central_fiber_reduced,
    dual_monoid,
    nondegeneracy_probe,
    relative_structure,
    verify_certificate,
)

EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
THREADS_ENV = "MOCKTORIC_THREADS"
CORPUS_DIR = Path(__file__).with_name("corpus")


class InputError(Exception):
    pass


@dataclass
class Outcome:
    """What a command produced: JSON payload, text summary, exit status."""

    payload: dict
    summary: list[str] = field(default_factory=list)
    status: int = EXIT_OK


def threads() -> int:
    """Worker count from the environment (default 1); work stays sequential
    and deterministic whatever the value."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def _load(path: str, kind: str, **kw):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise io.SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path) from exc
    try:
        if kind == "charted-function":
            return io.dec_charted(data, "$", **kw)
        if kind == "fan":
            return io.dec_fan(data, "$", validate=kw.get("validate", True))
        io._kind(data, kind, "$")
        return io.decode(data)
    except io.SchemaError as exc:
        raise io.SchemaError(str(exc).split(": ", 1)[-1], f"{path}:{exc.location}") from exc
    except (LatticeError, FanError, MockStructureError, ArrangementError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _cone_arg(fan, idx: int):
    if not 0 <= idx < len(fan.cones):
        raise InputError(f"cone index {idx} out of range (fan has {len(fan.cones)} cones)")
    return fan.cones[idx]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_lattice_snf(a) -> Outcome:
    m = _load(a.map, "lattice-map")
    u, d, v = smith_normal_form([list(r) for r in m.matrix], m.source_rank)
    diag = [d[i][i] for i in range(min(len(d), m.source_rank)) if d[i][i]]
    payload = {"kind": "smith-form", "U": [io.enc_vec(r) for r in u], "D": [io.enc_vec(r) for r in d],
               "V": [io.enc_vec(r) for r in v], "invariant_factors": io.enc_vec(diag)}
    return Outcome(payload, [f"invariant factors: {diag}"])


def cmd_lattice_quotient(a) -> Outcome:
    s = _load(a.sublattice, "sublattice")
    try:
        q = quotient_map(s)
    except LatticeError as exc:
        return Outcome({"kind": "error", "message": str(exc)}, [str(exc)], EXIT_MATH)
    return Outcome(io.enc_map(q), [f"quotient rank {q.target_rank}"])


def cmd_cone(a) -> Outcome:
    c = _load(a.cone, "cone")
    if a.action == "dual":
        d = dual(c)
        return Outcome(io.enc_cone(d), [f"dual rays {list(d.rays)}"])
    if a.action == "faces":
        fs = faces(c)
        return Outcome({"kind": "face-list", "faces": [io.enc_cone(f) for f in fs]}, [f"{len(fs)} faces"])
    m = multiplicity(c)
    return Outcome({"kind": "multiplicity", "index": io.enc_num(m.index), "unimodular": m.is_unimodular},
                   [f"multiplicity {m.index}"])


def cmd_fan_validate(a) -> Outcome:
    f = _load(a.fan, "fan", validate=False)
    try:
        g = fan_validate(f.maximal_cones, f.rank)
    except FanError as exc:
        return Outcome({"kind": "fan-validation", "valid": False, "message": str(exc),
                        "witness": io.enc_value(exc.witness)}, [f"invalid: {exc}"], EXIT_MATH)
    return Outcome({"kind": "fan-validation", "valid": True, "cones": io.enc_num(len(g.cones))},
                   [f"valid fan with {len(g.cones)} cones"])


def _predicates_outcome(rep) -> Outcome:
    ok = rep.compactly_arranged and rep.generically_unimodular and rep.specifically_reduced
    lines = [f"compactly_arranged: {rep.compactly_arranged}",
             f"generically_unimodular: {rep.generically_unimodular}",
             f"specifically_reduced: {rep.specifically_reduced}"]
    return Outcome(io.enc_predicates(rep), lines, EXIT_OK if ok else EXIT_MATH)


def cmd_fan_predicates(a) -> Outcome:
    return _predicates_outcome(shape_predicates(_load(a.fan, "fan")))


def cmd_fan_unimodular(a) -> Outcome:
    g = make_unimodular(_load(a.fan, "fan"))
    return Outcome(io.enc_fan(g), [f"{len(g.maximal_cones)} unimodular maximal cones"])


def cmd_fan_star(a) -> Outcome:
    f = _load(a.fan, "fan")
    g, q = star_quotient(f, _cone_arg(f, a.cone))
    return Outcome({"kind": "star-quotient", "fan": io.enc_fan(g), "map": io.enc_map(q)},
                   [f"star fan of rank {g.rank} with {len(g.cones)} cones"])


def cmd_fan_slice(a) -> Outcome:
    res = slice_and_project(_load(a.fan, "fan"))
    return Outcome({"kind": "slice", "height_zero": io.enc_fan(res.height_zero),
                    "projected": io.enc_fan(res.projected)},
                   [f"height-zero subfan with {len(res.height_zero.cones)} cones"])


def cmd_poly_val(a) -> Outcome:
    f = _load(a.poly, "poly")
    v = _ints(a.point)
    if len(v) != f.rank:
        raise InputError(f"point has length {len(v)}, polynomial rank is {f.rank}")
    val = val_eval(f, v)
    return Outcome({"kind": "valuation", "value": io.enc_num(val),
                    "argmin": [io.enc_vec(e) for e in argmin_support(f, v)]}, [f"val = {val}"])


def cmd_poly_refine(a) -> Outcome:
    d, f = _load(a.fan, "fan"), _load(a.poly, "poly")
    g = refine_along(d, f)
    return Outcome(io.enc_fan(g), [f"{len(g.maximal_cones)} maximal cones"])


def cmd_poly_fine(a) -> Outcome:
    d, f = _load(a.fan, "fan"), _load(a.poly, "poly")
    rep = is_fine_fan(d, f)
    payload = {"kind": "fineness", "fine": rep.fine,
               "certificates": [{"cone": io.enc_cone(c), "certificate": None if x is None else io.enc_vec(x)}
                                for c, x in rep.certificates]}
    return Outcome(payload, [f"fine: {rep.fine}"], EXIT_OK if rep.fine else EXIT_MATH)


def cmd_poly_probe(a) -> Outcome:
    v = nondegeneracy_probe(_load(a.poly, "poly"), a.mode, _ints(a.primes))
    status = {"smooth": EXIT_OK, "singular": EXIT_MATH}.get(v.status, EXIT_MATH)
    return Outcome(io.enc_verdict(v), [f"{v.status} ({v.mode})" + (f": {v.caveat}" if v.caveat else "")], status)


def _report_payload(rep) -> dict:
    return {"kind": "verification-report", "all_pass": rep.all_pass,
            "conditions": [{"condition": k, "passed": r.passed, "witness": io.enc_value(r.witness),
                            "note": r.note} for k, r in rep.conditions]}


def cmd_mock_verify(a) -> Outcome:
    rep = verify_conditions(_load(a.structure, "mock"))
    lines = [f"condition {k}: " + ("pass" if r.passed else "n/a" if r.passed is None else f"FAIL {r.witness}")
             + (f" ({r.note})" if r.note else "") for k, r in rep.conditions]
    return Outcome(_report_payload(rep), lines, EXIT_OK if rep.all_pass else EXIT_MATH)


def cmd_mock_orbit(a) -> Outcome:
    ms = _load(a.structure, "mock")
    induced = induce_orbit(ms, _cone_arg(ms.fan, a.cone))
    return Outcome(io.enc_mock(induced), [f"orbit structure of rank {induced.rank}, charts {list(induced.phi)}"])


def cmd_mock_correspondences(a) -> Outcome:
    rep = relative_correspondences(_load(a.structure, "mock"))
    payload = {"kind": "correspondence-report", "passed": rep.passed, "witness": io.enc_value(rep.witness),
               "bijection": [[p, ok] for p, ok in rep.bijection],
               "commutation": [[p, ok] for p, ok in rep.commutation]}
    return Outcome(payload, [f"passed: {rep.passed}"], EXIT_OK if rep.passed else EXIT_MATH)


def cmd_arrangement_fan(a) -> Outcome:
    bf = bergman_fan(_load(a.arrangement, "arrangement"))
    return Outcome(io.enc_fan(bf.fan), [f"{len(bf.flats)} flats, {len(bf.fan.rays)} rays"])


def cmd_arrangement_structure(a) -> Outcome:
    ms = structure_from_arrangement(_load(a.arrangement, "arrangement"))
    return Outcome(io.enc_mock(ms), [f"{len(ms.phi)} charts on {len(ms.fan.rays)} rays"])


def cmd_arrangement_delpezzo(a) -> Outcome:
    arr = _load(a.arrangement, "arrangement")
    try:
        ms = del_pezzo_demo(arr.forms)
    except ArrangementError as exc:
        return Outcome({"kind": "error", "message": str(exc)}, [str(exc)], EXIT_MATH)
    rep = verify_conditions(ms)
    return Outcome({"kind": "del-pezzo", "structure": io.enc_mock(ms), "report": _report_payload(rep)},
                   [f"{len(ms.fan.rays)} rays, conditions pass: {rep.all_pass}"],
                   EXIT_OK if rep.all_pass else EXIT_MATH)


def cmd_toroidal_certify(a) -> Outcome:
    ms = _load(a.structure, "mock")
    if (a.pi is None) != (a.section is None):
        raise InputError("--pi and --section must be given together")
    if a.pi is None:
        pi = section = LatticeMap.identity(ms.rank)
    else:
        pi, section = _load(a.pi, "lattice-map"), _load(a.section, "lattice-map")
    try:
        w = relative_structure(ms, pi, section)
    except MockStructureError as exc:
        raise InputError(f"π and section do not fit the structure: {exc}") from exc
    cf = _load(a.poly, "charted-function", ms=w)
    cert = certify(ms, pi, section, cf, CertifyOptions(a.probe, _ints(a.primes)))
    lines = [f"{o.status}: {o.item}" + (f" (witness {o.witness})" if o.witness is not None else "")
             for o in cert.ledger]
    return Outcome(io.enc_certificate(cert), lines, EXIT_MATH if cert.failed else EXIT_OK)


def cmd_toroidal_verify(a) -> Outcome:
    cert = _load(a.certificate, "toroidal-certificate")
    res = verify_certificate(cert)
    ok = all(res.values())
    return Outcome({"kind": "certificate-check", "all_verified": ok, "items": [[k, v] for k, v in res.items()]},
                   [f"{'ok' if v else 'FAILED'}: {k}" for k, v in res.items()], EXIT_OK if ok else EXIT_MATH)


def cmd_toroidal_reduced(a) -> Outcome:
    c = _load(a.cone, "cone")
    r = central_fiber_reduced(c)
    return Outcome({"kind": "central-fiber", "reduced": r}, [f"reduced: {r}"], EXIT_OK if r else EXIT_MATH)


def cmd_toroidal_monoid(a) -> Outcome:
    m = dual_monoid(_load(a.cone, "cone"))
    return Outcome(io.enc_monoid(m), [f"{len(m.generators)} generators, ω = {m.omega}"])


def cmd_corpus_run(a) -> Outcome:
    from .corpus_runner import run_corpus

    return run_corpus(Path(a.dir) if a.dir else CORPUS_DIR, regenerate=False)


def cmd_corpus_regenerate(a) -> Outcome:
    from .corpus_runner import run_corpus

    return run_corpus(Path(a.dir) if a.dir else CORPUS_DIR, regenerate=True)


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-o", "--output", help="write the JSON result here instead of stdout")

    parser = argparse.ArgumentParser(prog="mocktoric", description="Exact toolkit for mock toric structures.")
    top = parser.add_subparsers(dest="group", required=True)

    def add(group_parser, name: str, func: Callable, *args: tuple):
        p = group_parser.add_parser(name, parents=[common])
        for arg in args:
            flags, kw = arg[:-1], arg[-1]
            p.add_argument(*flags, **kw)
        p.set_defaults(func=func)
        return p

    g = top.add_parser("lattice").add_subparsers(dest="cmd", required=True)
    add(g, "snf", cmd_lattice_snf, ("map", {}))
    add(g, "quotient", cmd_lattice_quotient, ("sublattice", {}))

    g = top.add_parser("cone").add_subparsers(dest="cmd", required=True)
    for action in ("dual", "faces", "multiplicity"):
        add(g, action, cmd_cone, ("cone", {})).set_defaults(action=action)

    g = top.add_parser("fan").add_subparsers(dest="cmd", required=True)
    add(g, "validate", cmd_fan_validate, ("fan", {}))
    add(g, "predicates", cmd_fan_predicates, ("fan", {}))
    add(g, "unimodular", cmd_fan_unimodular, ("fan", {}))
    add(g, "star", cmd_fan_star, ("fan", {}), ("--cone", {"type": int, "required": True}))
    add(g, "slice", cmd_fan_slice, ("fan", {}))

    g = top.add_parser("poly").add_subparsers(dest="cmd", required=True)
    add(g, "val", cmd_poly_val, ("poly", {}), ("--point", {"required": True}))
    add(g, "refine", cmd_poly_refine, ("fan", {}), ("poly", {}))
    add(g, "fine", cmd_poly_fine, ("fan", {}), ("poly", {}))
    add(g, "probe", cmd_poly_probe, ("poly", {}),
        ("--mode", {"choices": ("exact", "finite-field"), "default": "exact"}),
        ("--primes", {"default": "5,7,11"}))

    g = top.add_parser("mock").add_subparsers(dest="cmd", required=True)
    add(g, "verify", cmd_mock_verify, ("structure", {}))
    add(g, "orbit", cmd_mock_orbit, ("structure", {}), ("--cone", {"type": int, "required": True}))
    add(g, "correspondences", cmd_mock_correspondences, ("structure", {}))

    g = top.add_parser("arrangement").add_subparsers(dest="cmd", required=True)
    add(g, "fan", cmd_arrangement_fan, ("arrangement", {}))
    add(g, "structure", cmd_arrangement_structure, ("arrangement", {}))
    add(g, "delpezzo", cmd_arrangement_delpezzo, ("arrangement", {}))

    g = top.add_parser("toroidal").add_subparsers(dest="cmd", required=True)
    add(g, "certify", cmd_toroidal_certify, ("--structure", {"required": True}), ("--poly", {"required": True}),
        ("--pi", {}), ("--section", {}),
        ("--probe", {"choices": ("exact", "finite-field"), "default": "exact"}),
        ("--primes", {"default": "5,7,11"}))
    add(g, "verify", cmd_toroidal_verify, ("certificate", {}))
    add(g, "reduced", cmd_toroidal_reduced, ("--cone", {"required": True}))
    add(g, "monoid", cmd_toroidal_monoid, ("--cone", {"required": True}))

    g = top.add_parser("corpus").add_subparsers(dest="cmd", required=True)
    add(g, "run", cmd_corpus_run, ("--dir", {}))
    add(g, "regenerate", cmd_corpus_regenerate, ("--dir", {}))
    return parser


def execute(argv: Sequence[str]) -> tuple[Outcome, argparse.Namespace | None]:
    """Parse and run; errors become outcomes with the matching exit code."""
    parser = build_parser()
    try:
        a = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT
        return Outcome({"kind": "error", "message": "usage"}, [], EXIT_OK if code == 0 else EXIT_INPUT), None
    try:
        threads()
        return a.func(a), a
    except ResourceGuardError as exc:
        return Outcome({"kind": "error", "message": str(exc)}, [f"resource guard: {exc}"], EXIT_GUARD), a
    except (io.SchemaError, InputError) as exc:
        return Outcome({"kind": "error", "message": str(exc)}, [f"input error: {exc}"], EXIT_INPUT), a
    except (LatticeError, FanError, MockStructureError, ArrangementError, ToroidalError, ValueError) as exc:
        witness = getattr(exc, "witness", None)
        return Outcome({"kind": "error", "message": str(exc), "witness": io.enc_value(witness)},
                       [f"error: {exc}"], EXIT_MATH), a


def main(argv: Sequence[str] | None = None) -> int:
    outcome, a = execute(sys.argv[1:] if argv is None else argv)
    if a is None:
        return outcome.status
    text = io.dumps(outcome.payload)
    if a.output:
        Path(a.output).write_text(text, encoding="utf-8")
    if a.format == "text":
        for line in outcome.summary:
            print(line)
    elif not a.output:
        sys.stdout.write(text)
    if outcome.status and outcome.payload.get("kind") == "error":
        print(outcome.payload["message"], file=sys.stderr)
    return outcome.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
