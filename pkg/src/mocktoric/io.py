"""Canonical JSON encoding of the domain types.

Integers are written as decimal strings and rationals as "p/q", so files
never depend on floating point.  Every object carries a ``kind`` tag;
:func:`dumps` produces byte-identical output for equal inputs.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Callable

from .arrangement import Arrangement
from .cone import Cone, cone_from_rays
from .fan import Fan, FanPredicateReport
from .lattice import LatticeMap, Sublattice
from .laurent import LaurentPoly
from .mock import ChartedFunction, MockStructure, Origin
from .toroidal import (
    CertifyOptions,
    ConeMonoid,
    FaceProbe,
    MonoidPresentation,
    Obligation,
    ProbeVerdict,
    ToroidalCertificate,
)


class SchemaError(ValueError):
    """Input does not match the schema; ``location`` is a JSON path."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def enc_num(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dec_int(x, loc: str = "$") -> int:
    if isinstance(x, bool):
        raise SchemaError("expected an integer", loc)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise SchemaError(f"expected an integer, got {x!r}", loc)


def dec_num(x, loc: str = "$") -> Fraction:
    if isinstance(x, bool):
        raise SchemaError("expected a rational", loc)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"expected a rational, got {x!r}", loc)


def enc_vec(v) -> list[str]:
    return [enc_num(x) for x in v]


def dec_vec(v, loc: str = "$", length: int | None = None) -> tuple[int, ...]:
    if not isinstance(v, list):
        raise SchemaError("expected a list", loc)
    out = tuple(dec_int(x, f"{loc}[{i}]") for i, x in enumerate(v))
    if length is not None and len(out) != length:
        raise SchemaError(f"expected length {length}, got {len(out)}", loc)
    return out


def _get(d, key: str, loc: str):
    if not isinstance(d, dict):
        raise SchemaError("expected an object", loc)
    if key not in d:
        raise SchemaError(f"missing field {key!r}", loc)
    return d[key]


def _list(d, key: str, loc: str) -> list:
    v = _get(d, key, loc)
    if not isinstance(v, list):
        raise SchemaError("expected a list", f"{loc}.{key}")
    return v


def _kind(d, kind: str, loc: str):
    k = _get(d, "kind", loc)
    if k != kind:
        raise SchemaError(f"expected kind {kind!r}, got {k!r}", loc)


# ---------------------------------------------------------------------------
# lattice, cone, fan
# ---------------------------------------------------------------------------


def enc_map(m: LatticeMap) -> dict:
    return {"kind": "lattice-map", "source_rank": enc_num(m.source_rank),
            "target_rank": enc_num(m.target_rank), "matrix": [enc_vec(r) for r in m.matrix]}


def dec_map(d, loc: str = "$") -> LatticeMap:
    _kind(d, "lattice-map", loc)
    s = dec_int(_get(d, "source_rank", loc), f"{loc}.source_rank")
    t = dec_int(_get(d, "target_rank", loc), f"{loc}.target_rank")
    rows = tuple(dec_vec(r, f"{loc}.matrix[{i}]", s) for i, r in enumerate(_list(d, "matrix", loc)))
    if len(rows) != t:
        raise SchemaError("row count differs from target rank", f"{loc}.matrix")
    return LatticeMap(rows, s, t)


def enc_sublattice(s: Sublattice) -> dict:
    return {"kind": "sublattice", "ambient_rank": enc_num(s.ambient_rank),
            "basis": [enc_vec(b) for b in s.canonical().basis]}


def dec_sublattice(d, loc: str = "$") -> Sublattice:
    _kind(d, "sublattice", loc)
    n = dec_int(_get(d, "ambient_rank", loc), f"{loc}.ambient_rank")
    gens = [dec_vec(b, f"{loc}.basis[{i}]", n) for i, b in enumerate(_list(d, "basis", loc))]
    return Sublattice.spanned_by(n, gens)


def enc_cone(c: Cone) -> dict:
    return {"kind": "cone", "rank": enc_num(c.rank), "rays": [enc_vec(r) for r in c.rays],
            "lineality": [enc_vec(r) for r in c.lineality]}


def dec_cone(d, loc: str = "$") -> Cone:
    _kind(d, "cone", loc)
    n = dec_int(_get(d, "rank", loc), f"{loc}.rank")
    gens = [dec_vec(r, f"{loc}.rays[{i}]", n) for i, r in enumerate(_list(d, "rays", loc))]
    lin = [dec_vec(r, f"{loc}.lineality[{i}]", n) for i, r in enumerate(d.get("lineality", []))]
    gens += lin + [tuple(-x for x in v) for v in lin]
    return cone_from_rays(gens, n)


def enc_fan(f: Fan) -> dict:
    rays = list(f.rays)
    index = {r: i for i, r in enumerate(rays)}
    cones = sorted(sorted(index[r] for r in c.rays) for c in f.maximal_cones)
    return {"kind": "fan", "rank": enc_num(f.rank), "rays": [enc_vec(r) for r in rays],
            "cones": [[enc_num(i) for i in c] for c in cones]}


def dec_fan(d, loc: str = "$", validate: bool = True) -> Fan:
    from .fan import fan_validate

    _kind(d, "fan", loc)
    n = dec_int(_get(d, "rank", loc), f"{loc}.rank")
    rays = [dec_vec(r, f"{loc}.rays[{i}]", n) for i, r in enumerate(_list(d, "rays", loc))]
    cones = []
    for i, c in enumerate(_list(d, "cones", loc)):
        idx = dec_vec(c, f"{loc}.cones[{i}]")
        if any(not 0 <= j < len(rays) for j in idx):
            raise SchemaError("ray index out of range", f"{loc}.cones[{i}]")
        cones.append(cone_from_rays([rays[j] for j in idx], n))
    if validate:
        return fan_validate(cones, n)
    return Fan.from_cones(n, cones)


def _enc_subfan(sub: Fan, rays_index: dict) -> list:
    return sorted(sorted(rays_index[r] for r in c.rays) for c in sub.maximal_cones)


# ---------------------------------------------------------------------------
# polynomials, structures, charted functions, arrangements
# ---------------------------------------------------------------------------


def enc_poly(p: LaurentPoly) -> dict:
    return {"kind": "poly", "rank": enc_num(p.rank),
            "terms": [{"exponent": enc_vec(e), "coeff": enc_num(c)} for e, c in sorted(p.terms.items())]}


def dec_poly(d, loc: str = "$") -> LaurentPoly:
    _kind(d, "poly", loc)
    n = dec_int(_get(d, "rank", loc), f"{loc}.rank")
    terms: dict = {}
    for i, t in enumerate(_list(d, "terms", loc)):
        e = dec_vec(_get(t, "exponent", f"{loc}.terms[{i}]"), f"{loc}.terms[{i}].exponent", n)
        terms[e] = terms.get(e, 0) + dec_num(_get(t, "coeff", f"{loc}.terms[{i}]"), f"{loc}.terms[{i}].coeff")
    return LaurentPoly(n, terms)


def enc_mock(ms: MockStructure) -> dict:
    rays = list(ms.fan.rays)
    index = {r: i for i, r in enumerate(rays)}
    out = {"kind": "mock", "rank": enc_num(ms.rank), "provenance": ms.provenance, "fan": enc_fan(ms.fan),
           "charts": [{"label": p, "sublattice": [enc_vec(b) for b in ms.sublattices[p].canonical().basis],
                       "cones": [[enc_num(i) for i in c] for c in _enc_subfan(ms.subfans[p], index)]}
                      for p in ms.phi]}
    if ms.origin is not None:
        out["origin"] = {"base": enc_mock(ms.origin.base), "pi": enc_map(ms.origin.pi),
                         "section": enc_map(ms.origin.section)}
    return out


def dec_mock(d, loc: str = "$") -> MockStructure:
    _kind(d, "mock", loc)
    n = dec_int(_get(d, "rank", loc), f"{loc}.rank")
    fan = dec_fan(_get(d, "fan", loc), f"{loc}.fan")
    rays = list(fan.rays)
    labels, subs, fans = [], {}, {}
    for i, ch in enumerate(_list(d, "charts", loc)):
        cl = f"{loc}.charts[{i}]"
        p = _get(ch, "label", cl)
        if not isinstance(p, str):
            raise SchemaError("chart label must be a string", f"{cl}.label")
        labels.append(p)
        subs[p] = Sublattice.spanned_by(n, [dec_vec(b, f"{cl}.sublattice[{j}]", n)
                                            for j, b in enumerate(_list(ch, "sublattice", cl))])
        cones = []
        for j, c in enumerate(_list(ch, "cones", cl)):
            idx = dec_vec(c, f"{cl}.cones[{j}]")
            if any(not 0 <= k < len(rays) for k in idx):
                raise SchemaError("ray index out of range", f"{cl}.cones[{j}]")
            cones.append(cone_from_rays([rays[k] for k in idx], n))
        fans[p] = Fan.from_cones(n, cones)
    origin = None
    if "origin" in d:
        o = d["origin"]
        origin = Origin(dec_mock(_get(o, "base", f"{loc}.origin"), f"{loc}.origin.base"),
                        dec_map(_get(o, "pi", f"{loc}.origin"), f"{loc}.origin.pi"),
                        dec_map(_get(o, "section", f"{loc}.origin"), f"{loc}.origin.section"))
    return MockStructure(n, fan, tuple(labels), subs, fans, d.get("provenance", "direct"), origin)


def enc_charted(cf: ChartedFunction) -> dict:
    charts = []
    for p in sorted(cf.charts):
        entry = {"label": p, "poly": enc_poly(cf.charts[p])}
        if any(cf.units.get(p, ())):
            entry["unit"] = enc_vec(cf.units[p])
        charts.append(entry)
    return {"kind": "charted-function", "charts": charts}


def dec_charted(d, loc: str = "$", ms: MockStructure | None = None) -> ChartedFunction:
    """Chart entries may carry a ``basis`` (rows in M); converting those
    needs the structure ``ms``."""
    _kind(d, "charted-function", loc)
    plain, based, units = {}, {}, {}
    for i, ch in enumerate(_list(d, "charts", loc)):
        cl = f"{loc}.charts[{i}]"
        p = _get(ch, "label", cl)
        poly = dec_poly(_get(ch, "poly", cl), f"{cl}.poly")
        if "unit" in ch:
            units[p] = dec_vec(ch["unit"], f"{cl}.unit")
        if "basis" in ch:
            if ms is None:
                raise SchemaError("chart basis given without a structure", cl)
            based[p] = (poly, [dec_vec(b, f"{cl}.basis[{j}]", ms.rank) for j, b in enumerate(ch["basis"])])
        else:
            plain[p] = poly
    if based:
        plain.update(ChartedFunction.from_bases(ms, based).charts)
    return ChartedFunction(plain, {p: m for p, m in units.items() if any(m)})


def enc_arrangement(a: Arrangement) -> dict:
    return {"kind": "arrangement", "n": enc_num(a.n), "forms": [[enc_num(x) for x in f] for f in a.forms]}


def dec_arrangement(d, loc: str = "$") -> Arrangement:
    _kind(d, "arrangement", loc)
    n = dec_int(_get(d, "n", loc), f"{loc}.n")
    forms = []
    for i, f in enumerate(_list(d, "forms", loc)):
        if not isinstance(f, list):
            raise SchemaError("expected a list", f"{loc}.forms[{i}]")
        forms.append([dec_num(x, f"{loc}.forms[{i}][{j}]") for j, x in enumerate(f)])
    return Arrangement.of(n, forms)


# ---------------------------------------------------------------------------
# tagged generic values (witnesses)
# ---------------------------------------------------------------------------


def enc_value(x) -> Any:
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, (int, Fraction)):
        return enc_num(x)
    if isinstance(x, str):
        return {"text": x}
    if isinstance(x, (tuple, list)):
        return [enc_value(v) for v in x]
    if isinstance(x, dict):
        return {"map": [[k, enc_value(v)] for k, v in x.items()]}
    return encode(x)


def dec_value(x, loc: str = "$") -> Any:
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, (int, str)):
        return dec_num(x, loc) if isinstance(x, str) and "/" in x else dec_int(x, loc)
    if isinstance(x, list):
        return tuple(dec_value(v, f"{loc}[{i}]") for i, v in enumerate(x))
    if isinstance(x, dict):
        if "text" in x:
            return x["text"]
        if "map" in x:
            return {k: dec_value(v, f"{loc}.{k}") for k, v in x["map"]}
        return decode(x, loc)
    raise SchemaError(f"unsupported value {x!r}", loc)


# ---------------------------------------------------------------------------
# toroidal certificate
# ---------------------------------------------------------------------------


def enc_monoid(m: MonoidPresentation) -> dict:
    return {"kind": "monoid", "cone": enc_cone(m.cone), "generators": [enc_vec(g) for g in m.generators],
            "omega": enc_vec(m.omega),
            "distinguished": None if m.distinguished is None else enc_num(m.distinguished),
            "expression": None if m.expression is None else [[enc_num(i), enc_num(c)] for i, c in m.expression]}


def dec_monoid(d, loc: str = "$") -> MonoidPresentation:
    _kind(d, "monoid", loc)
    cone = dec_cone(_get(d, "cone", loc), f"{loc}.cone")
    gens = tuple(dec_vec(g, f"{loc}.generators[{i}]") for i, g in enumerate(_list(d, "generators", loc)))
    dist = d.get("distinguished")
    expr = d.get("expression")
    return MonoidPresentation(cone, gens, dec_vec(_get(d, "omega", loc), f"{loc}.omega"),
                              None if dist is None else dec_int(dist, f"{loc}.distinguished"),
                              None if expr is None else tuple(dec_vec(e, f"{loc}.expression") for e in expr))


def enc_verdict(v: ProbeVerdict) -> dict:
    return {"kind": "probe-verdict", "status": v.status, "mode": v.mode, "primes": enc_vec(v.primes),
            "witness": enc_value(v.witness), "caveat": v.caveat}


def dec_verdict(d, loc: str = "$") -> ProbeVerdict:
    _kind(d, "probe-verdict", loc)
    return ProbeVerdict(_get(d, "status", loc), _get(d, "mode", loc), dec_vec(d.get("primes", [])),
                        dec_value(d.get("witness"), f"{loc}.witness"), d.get("caveat", ""))


def enc_predicates(r: FanPredicateReport) -> dict:
    return {"kind": "predicate-report", "spe_cones": enc_vec(r.spe_cones), "bdd_cones": enc_vec(r.bdd_cones),
            "compactly_arranged": r.compactly_arranged, "generically_unimodular": r.generically_unimodular,
            "specifically_reduced": r.specifically_reduced,
            "compactly_arranged_witness": enc_value(r.compactly_arranged_witness),
            "generically_unimodular_witness": enc_value(r.generically_unimodular_witness),
            "specifically_reduced_witness": enc_value(r.specifically_reduced_witness)}


def dec_predicates(d, loc: str = "$") -> FanPredicateReport:
    _kind(d, "predicate-report", loc)
    return FanPredicateReport(dec_vec(_get(d, "spe_cones", loc)), dec_vec(_get(d, "bdd_cones", loc)),
                              bool(_get(d, "compactly_arranged", loc)),
                              bool(_get(d, "generically_unimodular", loc)),
                              bool(_get(d, "specifically_reduced", loc)),
                              dec_value(d.get("compactly_arranged_witness")),
                              dec_value(d.get("generically_unimodular_witness")),
                              dec_value(d.get("specifically_reduced_witness")))


def _enc_fineness(table) -> list:
    return [{"cone": enc_cone(c), "chart": p, "certificate": None if x is None else enc_vec(x)}
            for c, p, x in table]


def _dec_fineness(lst, loc: str) -> tuple:
    out = []
    for i, e in enumerate(lst):
        x = e.get("certificate")
        out.append((dec_cone(_get(e, "cone", f"{loc}[{i}]"), f"{loc}[{i}].cone"), e["chart"],
                    None if x is None else dec_vec(x, f"{loc}[{i}].certificate")))
    return tuple(out)


def enc_certificate(c: ToroidalCertificate) -> dict:
    return {
        "kind": "toroidal-certificate",
        "digests": [{"input": k, "sha256": v} for k, v in c.digests],
        "options": {"probe": c.options.probe, "primes": enc_vec(c.options.primes)},
        "base_fan": enc_fan(c.base_fan),
        "pi": enc_map(c.pi),
        "support_fan": enc_fan(c.support_fan),
        "refined_fan": enc_fan(c.refined_fan),
        "final_fan": enc_fan(c.final_fan),
        "charts": [{"label": p, "chart_map": enc_map(q), "poly": enc_poly(g)} for p, q, g in c.charts],
        "refined_fineness": _enc_fineness(c.refined_fineness),
        "fineness": _enc_fineness(c.fineness),
        "predicates": enc_predicates(c.predicates),
        "monoids": [{"cone": enc_cone(m.cone), "reduced": m.reduced,
                     "splitting": None if m.splitting is None else enc_sublattice(m.splitting),
                     "chart_cone": None if m.chart_cone is None else enc_cone(m.chart_cone),
                     "monoid": None if m.monoid is None else enc_monoid(m.monoid)} for m in c.monoids],
        "probes": [{"cone": enc_cone(fp.cone), "chart": fp.chart, "face": enc_poly(fp.face),
                    "verdict": enc_verdict(fp.verdict)} for fp in c.probes],
        "ledger": [{"item": o.item, "status": o.status, "witness": enc_value(o.witness), "note": o.note}
                   for o in c.ledger],
        "semantics": c.semantics,
    }


def dec_certificate(d, loc: str = "$") -> ToroidalCertificate:
    _kind(d, "toroidal-certificate", loc)
    opts = _get(d, "options", loc)
    monoids = []
    for i, m in enumerate(_list(d, "monoids", loc)):
        ml = f"{loc}.monoids[{i}]"
        monoids.append(ConeMonoid(
            dec_cone(m["cone"], f"{ml}.cone"), bool(m["reduced"]),
            None if m.get("splitting") is None else dec_sublattice(m["splitting"], f"{ml}.splitting"),
            None if m.get("chart_cone") is None else dec_cone(m["chart_cone"], f"{ml}.chart_cone"),
            None if m.get("monoid") is None else dec_monoid(m["monoid"], f"{ml}.monoid")))
    probes = tuple(FaceProbe(dec_cone(p["cone"], f"{loc}.probes[{i}].cone"), p["chart"],
                             dec_poly(p["face"], f"{loc}.probes[{i}].face"),
                             dec_verdict(p["verdict"], f"{loc}.probes[{i}].verdict"))
                   for i, p in enumerate(_list(d, "probes", loc)))
    ledger = tuple(Obligation(o["item"], o["status"], dec_value(o.get("witness"), f"{loc}.ledger[{i}]"),
                              o.get("note", ""))
                   for i, o in enumerate(_list(d, "ledger", loc)))
    return ToroidalCertificate(
        tuple((e["input"], e["sha256"]) for e in _list(d, "digests", loc)),
        dec_fan(d["base_fan"], f"{loc}.base_fan", validate=False),
        dec_map(d["pi"], f"{loc}.pi"),
        dec_fan(d["support_fan"], f"{loc}.support_fan", validate=False),
        dec_fan(d["refined_fan"], f"{loc}.refined_fan", validate=False),
        dec_fan(d["final_fan"], f"{loc}.final_fan", validate=False),
        tuple((c["label"], dec_map(c["chart_map"]), dec_poly(c["poly"])) for c in _list(d, "charts", loc)),
        _dec_fineness(_list(d, "refined_fineness", loc), f"{loc}.refined_fineness"),
        _dec_fineness(_list(d, "fineness", loc), f"{loc}.fineness"),
        dec_predicates(d["predicates"], f"{loc}.predicates"),
        tuple(monoids), probes,
        CertifyOptions(opts["probe"], dec_vec(opts["primes"])),
        ledger,
        d.get("semantics", ""),
    )


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_ENCODERS: list[tuple[type, Callable]] = [
    (LatticeMap, enc_map), (Sublattice, enc_sublattice), (Cone, enc_cone), (Fan, enc_fan),
    (LaurentPoly, enc_poly), (MockStructure, enc_mock), (ChartedFunction, enc_charted),
    (Arrangement, enc_arrangement), (MonoidPresentation, enc_monoid), (ProbeVerdict, enc_verdict),
    (FanPredicateReport, enc_predicates), (ToroidalCertificate, enc_certificate),
]

_DECODERS: dict[str, Callable] = {
    "lattice-map": dec_map, "sublattice": dec_sublattice, "cone": dec_cone, "fan": dec_fan,
    "poly": dec_poly, "mock": dec_mock, "charted-function": dec_charted, "arrangement": dec_arrangement,
    "monoid": dec_monoid, "probe-verdict": dec_verdict, "predicate-report": dec_predicates,
    "toroidal-certificate": dec_certificate,
}


def encode(obj) -> dict:
    for t, f in _ENCODERS:
        if isinstance(obj, t):
            return f(obj)
    raise TypeError(f"no JSON encoding for {type(obj).__name__}")


def decode(d, loc: str = "$"):
    kind = _get(d, "kind", loc)
    if kind not in _DECODERS:
        raise SchemaError(f"unknown kind {kind!r}", f"{loc}.kind")
    return _DECODERS[kind](d, loc)


def _format(x, depth: int) -> str:
    if not isinstance(x, (dict, list)) or not x:
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, list) and all(not isinstance(v, (dict, list)) for v in x):
        return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in x) + "]"
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(x, list):
        return "[\n" + ",\n".join(inner + _format(v, depth + 1) for v in x) + "\n" + pad + "]"
    return "{\n" + ",\n".join(f"{inner}{json.dumps(k, ensure_ascii=False)}: {_format(v, depth + 1)}"
                              for k, v in x.items()) + "\n" + pad + "}"


def dumps(data) -> str:
    """Canonical text: key order fixed by the encoders, two-space indent,
    flat lists of scalars kept on one line."""
    if not isinstance(data, (dict, list)):
        data = encode(data)
    return _format(data, 0) + "\n"


def loads(text: str, kind: str | None = None):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    if kind is not None:
        _kind(d, kind, "$")
    return decode(d)


def load(path, kind: str | None = None):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), kind)


def digest(obj) -> str:
    return hashlib.sha256(dumps(obj).encode("utf-8")).hexdigest()
