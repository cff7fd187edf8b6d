"""Certification of strictly toroidal models over the half-line.

The pipeline takes a mock toric structure on N, a surjection π : N' -> N
with section s, and a charted function f on the pulled-back structure over
N' ⊕ Z (last coordinate = exponent of t).  It refines, unimodularizes,
evaluates the shape predicates, presents local chart monoids and probes the
face polynomials for smoothness, and records every obligation as
established, delegated or failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import sympy

from .cone import Cone, cone_from_rays, dual, image, multiplicity, parallelepiped_points
from .fan import (
    Fan,
    FanPredicateReport,
    fan_validate,
    half_line,
    is_refinement,
    make_unimodular,
    minimal_containing_cone,
    product_fan,
    shape_predicates,
    simplicialize,
    slice_and_project,
)
from .lattice import (
    LatticeError,
    LatticeMap,
    Sublattice,
    Vector,
    complement_splitting,
    coordinates,
    dot,
    kernel_basis,
    quotient_map,
    saturate_rows,
)
from .laurent import LaurentPoly, check_certificate, val_eval
from .mock import (
    ChartedFunction,
    MockStructure,
    MockStructureError,
    induce_pullback,
    mock_fineness,
    mock_refine_along,
    mock_restrict_orbit,
)

MAX_MONOID_RANK = 5
MAX_SCAN_RANK = 3
MAX_SCAN_PRIME = 17


class ToroidalError(ValueError):
    pass


class ResourceGuardError(ToroidalError):
    """The input exceeds a documented desk-scale limit."""


# ---------------------------------------------------------------------------
# central fibre
# ---------------------------------------------------------------------------


def _require_upper(s: Cone):
    if any(r[-1] < 0 for r in s.rays) or any(any(b) and b[-1] != 0 for b in s.lineality):
        raise ToroidalError(f"{s} leaves the upper half-space")


def central_fiber_reduced(s: Cone) -> bool:
    """True iff every ray of ``s`` of positive height has height exactly 1."""
    _require_upper(s)
    if all(r[-1] == 0 for r in s.rays):
        raise ToroidalError(f"{s} lies in the height-zero hyperplane")
    return all(r[-1] == 1 for r in s.rays if r[-1] > 0)


# ---------------------------------------------------------------------------
# chart monoids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonoidPresentation:
    """Minimal generators of s^∨ ∩ M with the exponent ω of t.

    ``distinguished`` is the index of ω among the generators when ω is
    itself irreducible; ``expression`` writes ω as Σ k_i · generators[i].
    """

    cone: Cone
    generators: tuple[Vector, ...]
    omega: Vector
    distinguished: int | None
    expression: tuple[tuple[int, int], ...] | None


def hilbert_basis(d: Cone) -> tuple[Vector, ...]:
    """Irreducible lattice points of a full-dimensional pointed cone.

    Every lattice point of a simplicial piece of ``d`` is a nonnegative
    integer combination of its rays plus one point of their fundamental
    parallelepiped, so rays and parallelepiped points generate; the
    irreducible ones among them form the Hilbert basis.
    """
    k = d.rank
    candidates: set[Vector] = set(d.rays)
    pieces = simplicialize(Fan.from_cones(k, [d])).maximal_cones
    for piece in pieces:
        for lam, pt in parallelepiped_points(piece.rays, k):
            if any(lam):
                candidates.add(pt)
    cands = sorted(candidates)
    out = []
    for x in cands:
        if not any(h != x and d.contains(tuple(a - b for a, b in zip(x, h))) for h in cands):
            out.append(x)
    return tuple(out)


def _decompose(h: Vector, basis: Sequence[Vector], cone: Cone) -> list[Vector]:
    out = []
    while any(h):
        g = next(g for g in basis if cone.contains(tuple(a - b for a, b in zip(h, g))))
        out.append(g)
        h = tuple(a - b for a, b in zip(h, g))
    return out


def dual_monoid(s: Cone) -> MonoidPresentation:
    """Presentation of the toric monoid s^∨ ∩ M, with ω = (0, …, 0, 1).

    The pointed part is computed in coordinates of the saturated span of
    ``s`` and lifted; the units s^⊥ ∩ M contribute ± a basis.
    """
    if not s.is_strongly_convex():
        raise ToroidalError("dual_monoid requires a strongly convex cone")
    r = s.rank
    if r > MAX_MONOID_RANK:
        raise ResourceGuardError(f"rank {r} exceeds the Hilbert basis limit {MAX_MONOID_RANK}")
    basis = saturate_rows(s.rays, r)
    k = len(basis)
    lifts: list[Vector] = []
    if k:
        b_map = LatticeMap(tuple(basis), r, k)
        local = cone_from_rays([tuple(int(x) for x in coordinates(basis, ray)) for ray in s.rays], k)
        d_local = dual(local)
        hb = hilbert_basis(d_local)
        rinv = b_map.right_inverse()
        lifts = [rinv(h) for h in hb]
    perp = kernel_basis(basis, r) if k else [tuple(row) for row in LatticeMap.identity(r).matrix]
    gens = tuple(lifts) + tuple(perp) + tuple(tuple(-x for x in p) for p in perp)
    omega = (0,) * (r - 1) + (1,)
    distinguished = gens.index(omega) if omega in gens else None
    expression = None
    if r and all(dot(omega, ray) >= 0 for ray in s.rays):
        counts = [0] * len(gens)
        rest = omega
        if k:
            h_omega = b_map(omega)
            for g in _decompose(h_omega, hb, d_local):
                counts[hb.index(g)] += 1
            used = [0] * r
            for i, c in enumerate(counts[:len(lifts)]):
                used = [u + c * x for u, x in zip(used, lifts[i])]
            rest = tuple(a - b for a, b in zip(omega, used))
        if perp:
            cs = coordinates(perp, rest)
            for j, c in enumerate(cs):
                c = int(c)
                if c > 0:
                    counts[len(lifts) + j] += c
                elif c < 0:
                    counts[len(lifts) + len(perp) + j] -= c
        expression = tuple((i, c) for i, c in enumerate(counts) if c)
    return MonoidPresentation(s, gens, omega, distinguished, expression)


def check_monoid(mp: MonoidPresentation) -> bool:
    """Re-verify a presentation: generators in s^∨, pairwise irreducible
    modulo units, ω reproduced by the expression and by the height."""
    s = mp.cone
    if any(dot(g, ray) < 0 for g in mp.generators for ray in s.rays):
        return False
    units = [g for g in mp.generators if all(dot(g, ray) == 0 for ray in s.rays)]
    pointed = [g for g in mp.generators if g not in units]
    for g in pointed:
        for h in pointed:
            if g != h:
                diff = tuple(a - b for a, b in zip(g, h))
                if all(dot(diff, ray) >= 0 for ray in s.rays):
                    return False
    if mp.expression is not None:
        total = [0] * s.rank
        for i, c in mp.expression:
            total = [t + c * x for t, x in zip(total, mp.generators[i])]
        if tuple(total) != mp.omega:
            return False
    return all(dot(mp.omega, ray) == ray[-1] for ray in s.rays)


# ---------------------------------------------------------------------------
# non-degeneracy probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeVerdict:
    status: str  # smooth | singular | inconclusive
    mode: str
    primes: tuple[int, ...] = ()
    witness: object = None
    caveat: str = ""

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


def reduce_variables(f: LaurentPoly) -> tuple[LaurentPoly, tuple[Vector, ...]]:
    """Rewrite f as χ^{e0} · g(χ^{b_1}, …, χ^{b_r}) with b a basis of the
    saturated span of the exponent differences; returns (g, b).

    The torus fibres over T^r, so {f = 0} is smooth iff {g = 0} is.
    """
    exps = f.support
    if not exps:
        return f, ()
    e0 = exps[0]
    diffs = [tuple(a - b for a, b in zip(e, e0)) for e in exps]
    basis = tuple(saturate_rows(diffs, f.rank))
    terms = {tuple(int(x) for x in coordinates(basis, d)) if basis else (): f.terms[e]
             for d, e in zip(diffs, exps)}
    return LaurentPoly(len(basis), terms), basis


def _sympy_poly(g: LaurentPoly, syms):
    lows = [min(e[i] for e in g.terms) for i in range(g.rank)]
    expr = 0
    for e, c in g.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for x, k, lo in zip(syms, e, lows):
            term *= x ** (k - lo)
        expr += term
    return sympy.expand(expr)


def _probe_exact(g: LaurentPoly, basis) -> ProbeVerdict:
    r = g.rank
    if r > 2:
        return ProbeVerdict("inconclusive", "exact", caveat=f"{r} effective variables exceed the exact limit 2")
    if r == 1:
        u = sympy.Symbol("u")
        p = sympy.Poly(_sympy_poly(g, [u]), u)
        common = sympy.gcd(p, p.diff(u))
        if common.degree() <= 0:
            return ProbeVerdict("smooth", "exact")
        rational = sorted(rt for rt in sympy.roots(common, filter="Q") if rt != 0)
        wit = {"basis": basis, "common_factor": str(common.as_expr())}
        if rational:
            wit["point"] = (str(rational[0]),)
        return ProbeVerdict("singular", "exact", witness=wit)
    u, v, w = sympy.symbols("u v w")
    p = _sympy_poly(g, [u, v])
    gens = [p, sympy.expand(u * sympy.diff(p, u)), sympy.expand(v * sympy.diff(p, v)), u * v * w - 1]
    gb = sympy.groebner(gens, w, u, v, order="lex")
    if list(gb.exprs) == [1]:
        return ProbeVerdict("smooth", "exact")
    wit = {"basis": basis, "groebner": tuple(str(e) for e in gb.exprs)}
    try:
        sols = sympy.solve(list(gb.exprs), [w, u, v], dict=True)
    except NotImplementedError:  # pragma: no cover - sympy limitation
        sols = []
    if sols:
        wit["point"] = (str(sols[0].get(u, u)), str(sols[0].get(v, v)))
    return ProbeVerdict("singular", "exact", witness=wit)


def _probe_finite_field(g: LaurentPoly, basis, primes: Sequence[int]) -> ProbeVerdict:
    primes = tuple(primes)
    r = g.rank
    if r > MAX_SCAN_RANK or not primes or any(p > MAX_SCAN_PRIME for p in primes):
        return ProbeVerdict("inconclusive", "finite-field", primes,
                            caveat=f"scan limited to r <= {MAX_SCAN_RANK}, p <= {MAX_SCAN_PRIME}")
    derivs = [g.toric_derivative(i) for i in range(r)]
    skipped = []
    for p in primes:
        if any(c.denominator % p == 0 for c in g.terms.values()):
            skipped.append(p)
            continue
        for pt in product(range(1, p), repeat=r):
            if g.evaluate(pt, p) == 0 and all(d.evaluate(pt, p) == 0 for d in derivs):
                return ProbeVerdict("singular", "finite-field", primes,
                                    {"basis": basis, "prime": p, "point": pt},
                                    f"common zero modulo {p}")
    scanned = tuple(p for p in primes if p not in skipped)
    if not scanned:
        return ProbeVerdict("inconclusive", "finite-field", primes,
                            caveat="every prime divides a coefficient denominator")
    note = f"no singular point over F_p for p in {list(scanned)}; smoothness in characteristic 0 not proven"
    if skipped:
        note += f"; skipped {skipped}"
    return ProbeVerdict("smooth", "finite-field", primes, caveat=note)


def nondegeneracy_probe(f: LaurentPoly, mode: str = "exact", primes: Sequence[int] = (5, 7, 11)) -> ProbeVerdict:
    """Is the hypersurface {f = 0} in the torus smooth?

    ``mode`` is "exact" (rational gcd / Gröbner elimination, at most two
    effective variables) or "finite-field" (exhaustive scan of (F_p^*)^r).
    Unsupported sizes give an inconclusive verdict.
    """
    if mode not in ("exact", "finite-field"):
        raise ToroidalError(f"unknown probe mode {mode!r}")
    used = tuple(primes) if mode == "finite-field" else ()
    if f.is_zero():
        return ProbeVerdict("inconclusive", mode, used, caveat="zero polynomial")
    g, basis = reduce_variables(f)
    if g.rank == 0:
        return ProbeVerdict("smooth", mode, used, caveat="monomial: empty hypersurface")
    if mode == "exact":
        return _probe_exact(g, basis)
    return _probe_finite_field(g, basis, primes)


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifyOptions:
    probe: str = "exact"
    primes: tuple[int, ...] = (5, 7, 11)


@dataclass(frozen=True)
class Obligation:
    item: str
    status: str  # established | delegated | failed
    witness: object = None
    note: str = ""


@dataclass(frozen=True)
class ConeMonoid:
    cone: Cone
    reduced: bool
    splitting: Sublattice | None
    chart_cone: Cone | None
    monoid: MonoidPresentation | None


@dataclass(frozen=True)
class FaceProbe:
    cone: Cone
    chart: str
    face: LaurentPoly
    verdict: ProbeVerdict


@dataclass(frozen=True)
class ToroidalCertificate:
    digests: tuple[tuple[str, str], ...]
    base_fan: Fan
    pi: LatticeMap
    support_fan: Fan
    refined_fan: Fan
    final_fan: Fan
    charts: tuple[tuple[str, LatticeMap, LaurentPoly], ...]
    refined_fineness: tuple[tuple[Cone, str, Vector | None], ...]
    fineness: tuple[tuple[Cone, str, Vector | None], ...]
    predicates: FanPredicateReport
    monoids: tuple[ConeMonoid, ...]
    probes: tuple[FaceProbe, ...]
    options: CertifyOptions
    ledger: tuple[Obligation, ...]
    semantics: str = field(default=(
        "combinatorial data over k[t]; base change to the Puiseux valuation ring leaves the fans, "
        "charts and certificates unchanged"))

    def status(self, item: str) -> str:
        return next(o.status for o in self.ledger if o.item == item)

    @property
    def established(self) -> tuple[Obligation, ...]:
        return tuple(o for o in self.ledger if o.status == "established")

    @property
    def failed(self) -> tuple[Obligation, ...]:
        return tuple(o for o in self.ledger if o.status == "failed")


def _block(m: LatticeMap) -> LatticeMap:
    """m × id_Z."""
    rows = tuple(tuple(r) + (0,) for r in m.matrix) + ((0,) * m.source_rank + (1,),)
    return LatticeMap(rows, m.source_rank + 1, m.target_rank + 1)


def _first_projection(n: int) -> LatticeMap:
    return LatticeMap(tuple(tuple(int(i == j) for j in range(n + 1)) for i in range(n)), n + 1, n)


def _height_zero_embedding(n: int) -> LatticeMap:
    rows = tuple(tuple(int(i == j) for j in range(n)) for i in range(n)) + ((0,) * n,)
    return LatticeMap(rows, n, n + 1)


def pulled_back_support_fan(base: Fan, pi1: LatticeMap, s1: LatticeMap) -> Fan:
    """A strongly convex fan with support (π¹)^{-1}(supp base).

    N' ⊕ Z = s¹(N ⊕ Z) ⊕ ker π¹; the kernel is covered by its coordinate
    orthants, so the fan is base × (orthant fan) in these coordinates.
    """
    ker = kernel_basis(pi1.matrix, pi1.source_rank) if pi1.matrix else []
    orthants = [[]]
    for k in ker:
        orthants = [o + [tuple(sgn * x for x in k)] for o in orthants for sgn in (1, -1)]
    cones = []
    for c in base.maximal_cones:
        lifted = [s1(r) for r in c.rays]
        for o in orthants:
            cones.append(Cone._from_extreme_rays(pi1.source_rank, lifted + list(o)))
    return Fan.from_cones(pi1.source_rank, cones)


def _relative_structures(ms: MockStructure, pi: LatticeMap, section: LatticeMap
                         ) -> tuple[MockStructure, MockStructure]:
    n = ms.rank
    base = product_fan(ms.fan, half_line())
    z1 = induce_pullback(ms, _first_projection(n), _height_zero_embedding(n), base)
    pi1, s1 = _block(pi), _block(section)
    return z1, induce_pullback(z1, pi1, s1, pulled_back_support_fan(base, pi1, s1))


def relative_structure(ms: MockStructure, pi: LatticeMap, section: LatticeMap) -> MockStructure:
    """The structure over N' ⊕ Z on the pulled-back support fan; its chart
    coordinates are the ones :func:`certify` expects the function in."""
    return _relative_structures(ms, pi, section)[1]


def _chart_monoid(c: Cone) -> ConeMonoid:
    reduced = central_fiber_reduced(c)
    rank_ = c.rank
    lp = Sublattice(rank_, tuple(saturate_rows(c.rays, rank_)))
    try:
        nsplit = complement_splitting(lp)
    except LatticeError:
        return ConeMonoid(c, reduced, None, None, None)
    q = _block(quotient_map(nsplit))
    chart_cone = image(c, q)
    return ConeMonoid(c, reduced, nsplit, chart_cone, dual_monoid(chart_cone))


def certify(ms: MockStructure, pi: LatticeMap, section: LatticeMap, cf: ChartedFunction,
            opts: CertifyOptions | None = None) -> ToroidalCertificate:
    """Run the strictly toroidal certification pipeline.

    ``cf`` gives the chart polynomials over (N' ⊕ Z)/N'_φ in the canonical
    chart coordinates of the pulled-back structure.
    """
    from .io import digest

    opts = opts or CertifyOptions()
    n = ms.rank
    if pi.target_rank != n:
        raise ToroidalError("π does not land in N")
    ledger: list[Obligation] = []

    z1, w0 = _relative_structures(ms, pi, section)
    pi1, s1 = _block(pi), _block(section)
    support = w0.fan

    refined = mock_refine_along(w0, cf)
    wf = induce_pullback(z1, pi1, s1, refined)
    fine_f = mock_fineness(wf, cf)
    final = make_unimodular(refined)
    w = induce_pullback(z1, pi1, s1, final)
    fine = mock_fineness(w, cf)
    charts = tuple((p, w.chart_map(p), cf.charts[p]) for p in w.phi if p in cf.charts)

    bad = next(((c, p) for c, p, x in fine_f.certificates if x is None), None)
    ledger.append(Obligation("fineness of the refined fan", "established" if bad is None else "failed",
                             bad, "common minimiser at every ray, per chart"))
    bad = next(((c, p) for c, p, x in fine.certificates if x is None), None)
    ledger.append(Obligation("fineness of the final fan", "established" if bad is None else "failed",
                             bad, "refinement of a fine fan"))
    uni = next((c for c in final.maximal_cones if not multiplicity(c).is_unimodular), None)
    ok = uni is None and is_refinement(final, refined)
    ledger.append(Obligation("unimodular refinement", "established" if ok else "failed", uni))

    pred = shape_predicates(final)
    if not (pred.generically_unimodular and pred.compactly_arranged):  # pragma: no cover
        raise ToroidalError("unimodular output violates the shape predicates")
    ledger.append(Obligation("compactly arranged", "established", None, "consequence of simpliciality"))
    ledger.append(Obligation("generically unimodular", "established", None, "consequence of unimodularity"))
    ledger.append(Obligation("specifically reduced",
                             "established" if pred.specifically_reduced else "failed",
                             pred.specifically_reduced_witness,
                             "bounded rays of height one"))

    monoids = tuple(_chart_monoid(final.cones[i]) for i in pred.spe_cones)
    bad = next((m.cone for m in monoids if not m.reduced), None)
    ledger.append(Obligation("reduced central fibre in every chart",
                             "established" if bad is None else "failed", bad))
    bad = next((m.cone for m in monoids if m.monoid is None or not check_monoid(m.monoid)), None)
    ledger.append(Obligation("chart monoids with t = χ^ω", "established" if bad is None else "failed", bad))

    bad = None
    for p in w.phi:
        q = w.chart_map(p)
        for c in w.subfans[p].cones:
            if len(c.rays) == 1 and c.rays[0][-1] > 0:
                img = image(c, q)
                if img.rays and img.rays[0][-1] != 1:
                    bad = bad or (p, c)
    if pred.specifically_reduced:
        ledger.append(Obligation("chart rays meet height one", "established" if bad is None else "failed", bad))

    certs = {c: {} for c in final.cones}
    for c, p, x in fine.certificates:
        if x is not None:
            certs[c][p] = x
    probes = []
    for c in final.cones:
        try:
            _, face = mock_restrict_orbit(w, cf, c, certs[c] or None)
        except MockStructureError as exc:
            probes.append(FaceProbe(c, "", LaurentPoly(0, {}),
                                    ProbeVerdict("inconclusive", opts.probe, caveat=str(exc))))
            continue
        p = next(iter(sorted(face.charts)))
        g = face.charts[p]
        probes.append(FaceProbe(c, p, g, nondegeneracy_probe(g, opts.probe, opts.primes)))
    statuses = {fp.verdict.status for fp in probes}
    singular = next((fp.cone for fp in probes if fp.verdict.status == "singular"), None)
    if singular is not None:
        ledger.append(Obligation("non-degenerate", "failed", singular,
                                 next(fp.verdict.caveat for fp in probes if fp.cone == singular)))
    elif statuses == {"smooth"} and opts.probe == "exact":
        ledger.append(Obligation("non-degenerate", "established", None, "exact probe on every orbit"))
    else:
        ledger.append(Obligation("non-degenerate", "delegated", None,
                                 f"probe mode {opts.probe}, primes {list(opts.primes)}"
                                 if opts.probe == "finite-field" else "inconclusive exact probe"))

    upper = all(r[-1] >= 0 for r in final.rays) and is_refinement(final, support)
    ledger.append(Obligation("fan lies over the half-line with the pulled-back support",
                             "established" if upper else "failed"))
    gen_ok = _generic_fiber_ok(final, pi, ms.fan)
    ledger.append(Obligation("generic fibre fan maps into Δ", "established" if gen_ok else "failed"))
    for item in ("properness of the model", "flatness of the hypersurface",
                 "factorization over the Puiseux field", "smoothness of the chart maps"):
        ledger.append(Obligation(item, "delegated", None, "outside the combinatorial scope"))

    digests = (("structure", digest(ms)), ("pi", digest(pi)), ("section", digest(section)),
               ("function", digest(cf)))
    return ToroidalCertificate(digests, ms.fan, pi, support, refined, final, charts,
                               fine_f.certificates, fine.certificates, pred, monoids, tuple(probes), opts, tuple(ledger))


def _generic_fiber_ok(final: Fan, pi: LatticeMap, base: Fan) -> bool:
    sl = slice_and_project(final)
    try:
        fan_validate(sl.projected.maximal_cones, sl.projected.rank)
    except Exception:
        return False
    for c in sl.projected.maximal_cones:
        sig = minimal_containing_cone(base, pi(c.interior_point()))
        if sig is None or not all(sig.contains(pi(r)) for r in c.rays):
            return False
    return True


# ---------------------------------------------------------------------------
# re-verification
# ---------------------------------------------------------------------------


def verify_certificate(cert: ToroidalCertificate) -> dict[str, bool]:
    """Recheck every established obligation from the data stored in ``cert``."""
    charts = {p: (q, g) for p, q, g in cert.charts}
    out = {}
    for ob in cert.established:
        item = ob.item
        if item.startswith("fineness"):
            if "refined" in item:
                fan, table = cert.refined_fan, cert.refined_fineness
            else:
                fan, table = cert.final_fan, cert.fineness
            out[item] = {c for c, _, _ in table} == set(fan.cones) and all(
                x is not None and fineness_holds(charts[p][1], image(c, charts[p][0]), x)
                for c, p, x in table)
        elif item == "unimodular refinement":
            out[item] = all(multiplicity(c).is_unimodular for c in cert.final_fan.maximal_cones) \
                and is_refinement(cert.final_fan, cert.refined_fan)
        elif item in ("compactly arranged", "generically unimodular", "specifically reduced"):
            rep = shape_predicates(cert.final_fan)
            out[item] = rep == cert.predicates and getattr(rep, item.replace(" ", "_"))
        elif item == "reduced central fibre in every chart":
            out[item] = all(central_fiber_reduced(m.cone) for m in cert.monoids)
        elif item == "chart monoids with t = χ^ω":
            out[item] = all(m.monoid is not None and check_monoid(m.monoid)
                            and image(m.cone, _block(quotient_map(m.splitting))) == m.chart_cone
                            for m in cert.monoids)
        elif item == "chart rays meet height one":
            out[item] = all(r[-1] == 1 for p, (q, _) in charts.items()
                            for c in cert.final_fan.cones if len(c.rays) == 1 and c.rays[0][-1] > 0
                            for r in image(c, q).rays)
        elif item == "non-degenerate":
            out[item] = all(fp.verdict.exact and nondegeneracy_probe(fp.face, "exact").status == "smooth"
                            for fp in cert.probes)
        elif item == "fan lies over the half-line with the pulled-back support":
            out[item] = all(r[-1] >= 0 for r in cert.final_fan.rays) \
                and is_refinement(cert.final_fan, cert.support_fan)
        elif item == "generic fibre fan maps into Δ":
            out[item] = _generic_fiber_ok(cert.final_fan, cert.pi, cert.base_fan)
        else:  # pragma: no cover
            out[item] = False
    return out


def fineness_holds(g: LaurentPoly, c: Cone, cert: Sequence[int]) -> bool:
    """The certificate is valid on c and matches val_eval at every ray."""
    return check_certificate(g, c, cert) and all(val_eval(g, r) == -dot(r, cert) for r in c.rays)
