"""Mock toric structures in combinatorial form.

A structure is a fan Δ in N together with charts φ, each carrying a
sublattice N_φ and a subfan Δ_φ; the chart lattice is N/N_φ, presented by
the canonical :func:`~mocktoric.lattice.quotient_map`.  Functions on the
underlying variety are given chart by chart (:class:`ChartedFunction`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping, Sequence

from .cone import Cone, image, intersect
from .fan import Fan, fan_validate, minimal_containing_cone, projection_first, star_quotient
from .lattice import (
    LatticeMap,
    Sublattice,
    Vector,
    determinant,
    dot,
    inverse_unimodular,
    primitive,
    quotient_map,
    rank,
    saturate_rows,
    saturation,
    solve_rational,
    sum_is_saturated,
    transpose,
)
from .laurent import (
    LaurentPoly,
    fineness_certificate,
    linearity_regions,
    pullback,
    restrict_to_orbit,
    val_eval,
)

PROVENANCES = ("direct", "arrangement", "induced-orbit", "induced-pullback")


class MockStructureError(ValueError):
    """Malformed structure, or an operation whose hypotheses fail."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InconsistentChartsError(MockStructureError):
    """Two charts disagree on a valuation."""


@dataclass(frozen=True)
class Origin:
    """How a pulled-back structure was produced: base structure, π, section."""

    base: "MockStructure"
    pi: LatticeMap
    section: LatticeMap


@dataclass(frozen=True, eq=False)
class MockStructure:
    rank: int
    fan: Fan
    phi: tuple[str, ...]
    sublattices: Mapping[str, Sublattice]
    subfans: Mapping[str, Fan]
    provenance: str = "direct"
    origin: Origin | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise MockStructureError(f"unknown provenance {self.provenance!r}")
        if len(set(self.phi)) != len(self.phi):
            raise MockStructureError("chart labels are not distinct")
        if self.fan.rank != self.rank:
            raise MockStructureError("fan rank differs from lattice rank")
        for p in self.phi:
            if p not in self.sublattices or p not in self.subfans:
                raise MockStructureError(f"chart {p!r} lacks a sublattice or subfan", witness=(p,))
            if self.sublattices[p].ambient_rank != self.rank or self.subfans[p].rank != self.rank:
                raise MockStructureError(f"chart {p!r} lives in the wrong lattice", witness=(p,))
            for c in self.subfans[p].cones:
                if c not in self.fan:
                    raise MockStructureError(f"chart {p!r} has a cone outside Δ", witness=(p, c))
                for face in self.fan.cones:
                    if face.ray_set <= c.ray_set and face not in self.subfans[p]:
                        raise MockStructureError(f"subfan of chart {p!r} is not face-closed",
                                                 witness=(p, c))

    def __eq__(self, other):
        if not isinstance(other, MockStructure):
            return NotImplemented
        return (self.rank == other.rank and self.fan == other.fan and self.phi == other.phi
                and all(self.sublattices[p] == other.sublattices[p] and self.subfans[p] == other.subfans[p]
                        for p in self.phi))

    def __hash__(self):
        return hash((self.rank, self.fan, self.phi))

    def chart_map(self, p: str) -> LatticeMap:
        """q_φ : N -> N/N_φ in canonical coordinates."""
        return _chart_map_cached(self.sublattices[p])

    def charts_containing(self, c: Cone) -> list[str]:
        return [p for p in self.phi if c in self.subfans[p]]

    def chart_image_fan(self, p: str) -> Fan:
        """Δ(φ) = q_φ(Δ_φ)."""
        q = self.chart_map(p)
        return Fan(q.target_rank, [image(c, q) for c in self.subfans[p].cones])


_QCACHE: dict[Sublattice, LatticeMap] = {}


def _chart_map_cached(sub: Sublattice) -> LatticeMap:
    if sub not in _QCACHE:
        _QCACHE[sub] = quotient_map(saturation(sub))
    return _QCACHE[sub]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    passed: bool | None
    witness: tuple | None = None
    note: str = ""


@dataclass(frozen=True)
class VerificationReport:
    conditions: tuple[tuple[str, ConditionResult], ...]

    def __getitem__(self, key: str) -> ConditionResult:
        return dict(self.conditions)[key]

    @property
    def all_pass(self) -> bool:
        return all(self[k].passed for k in ("1", "2", "3"))


def check_condition_1(ms: MockStructure):
    for p in ms.phi:
        nb = ms.sublattices[p].basis
        for c in ms.subfans[p].cones:
            if not sum_is_saturated(ms.rank, saturate_rows(c.rays, ms.rank), nb):
                return (p, c)
    return None


def check_condition_2(ms: MockStructure):
    covered = set()
    for p in ms.phi:
        covered.update(ms.subfans[p].cones)
    for c in ms.fan.cones:
        if c not in covered:
            return (None, c)
    return None


def check_condition_3(ms: MockStructure):
    for p in ms.phi:
        nb = list(ms.sublattices[p].basis)
        for c in ms.subfans[p].cones:
            if rank(list(c.rays) + nb) != c.dim + len(nb):
                return (p, c)
        q = ms.chart_map(p)
        sub = ms.subfans[p]
        imgs = {c: image(c, q) for c in sub.maximal_cones}
        for a, b in combinations(sub.maximal_cones, 2):
            meet = sub.cone_with_rays(a.ray_set & b.ray_set)
            if intersect(imgs[a], imgs[b]) != image(meet, q):
                return (p, a, b)
    return None


def verify_conditions(ms: MockStructure) -> VerificationReport:
    """Check conditions (1)-(3); record the status of (4) and (5)."""
    out = []
    for name, check in (("1", check_condition_1), ("2", check_condition_2), ("3", check_condition_3)):
        w = check(ms)
        out.append((name, ConditionResult(w is None, w)))
    if ms.provenance == "direct":
        note = "user obligation"
    else:
        note = "established by construction"
    out.append(("4", ConditionResult(None, None, note)))
    out.append(("5", ConditionResult(None, None, note)))
    return VerificationReport(tuple(out))


# ---------------------------------------------------------------------------
# induced structures
# ---------------------------------------------------------------------------


def induce_orbit(ms: MockStructure, s: Cone) -> MockStructure:
    """Structure on the orbit closure of the stratum of ``s``."""
    if s not in ms.fan:
        raise MockStructureError(f"{s} is not a cone of Δ", witness=(s,))
    phis = tuple(p for p in ms.phi if s in ms.subfans[p])
    if not phis:
        raise MockStructureError("no chart contains the cone", witness=(s,))
    fan, q = star_quotient(ms.fan, s)
    subs, fans = {}, {}
    for p in phis:
        subs[p] = Sublattice.spanned_by(q.target_rank, [q(b) for b in ms.sublattices[p].basis])
        fans[p] = Fan(q.target_rank, [image(t, q) for t in ms.subfans[p].cones
                                      if s.ray_set <= t.ray_set])
    return MockStructure(q.target_rank, fan, phis, subs, fans, "induced-orbit")


def _ray_sum(c: Cone) -> Vector:
    return c.interior_point()


def induce_pullback(ms: MockStructure, pi: LatticeMap, section: LatticeMap, dprime: Fan) -> MockStructure:
    """Structure induced along a surjection π : N' -> N with section s.

    A cone τ of Δ' joins chart φ when π(τ) lies in supp(Δ_φ).  Since π(τ)
    is convex and sits in the cone σ of Δ whose relative interior holds the
    image of an interior point of τ, this happens exactly when σ ∈ Δ_φ.
    """
    if pi.target_rank != ms.rank or dprime.rank != pi.source_rank:
        raise MockStructureError("ranks of π, Δ' and N do not match")
    if not pi.is_surjective():
        raise MockStructureError("π is not surjective")
    if section.source_rank != pi.target_rank or section.target_rank != pi.source_rank \
            or pi.compose(section) != LatticeMap.identity(ms.rank):
        raise MockStructureError("s is not a section of π")
    home: dict[Cone, Cone] = {}
    for t in dprime.cones:
        sig = minimal_containing_cone(ms.fan, pi(_ray_sum(t)))
        if sig is None or not all(sig.contains(pi(r)) for r in t.rays):
            raise MockStructureError(f"π does not map {t} into a cone of Δ", witness=(t,))
        home[t] = sig
    subs, fans = {}, {}
    for p in ms.phi:
        subs[p] = Sublattice.spanned_by(pi.source_rank, [section(b) for b in ms.sublattices[p].basis])
        fans[p] = Fan(dprime.rank, [t for t in dprime.cones if home[t] in ms.subfans[p]])
    return MockStructure(pi.source_rank, dprime, ms.phi, subs, fans, "induced-pullback",
                         Origin(ms, pi, section))


@dataclass(frozen=True)
class CorrespondenceReport:
    passed: bool
    witness: tuple | None
    bijection: tuple[tuple[str, bool], ...]
    commutation: tuple[tuple[str, bool], ...]


def _height_zero(c: Cone) -> bool:
    return all(r[-1] == 0 for r in c.rays)


def relative_correspondences(ms: MockStructure) -> CorrespondenceReport:
    """Check the height-zero bijections and the chart/slice commutation for a
    structure over N' ⊕ Z.

    When the structure carries its origin, the expected chart membership of
    height-zero cones is recomputed from the base structure; otherwise the
    stored subfans are taken as the reference.
    """
    for c in ms.fan.cones:
        if any(r[-1] < 0 for r in c.rays):
            raise MockStructureError(f"{c} leaves the upper half-space", witness=(c,))
    n = ms.rank - 1
    zero = [c for c in ms.fan.cones if _height_zero(c)]
    witness = None
    bij, comm = [], []
    for p in ms.phi:
        actual = [c for c in zero if c in ms.subfans[p]]
        if ms.origin is not None:
            o = ms.origin
            expected = []
            for c in zero:
                sig = minimal_containing_cone(o.base.fan, o.pi(_ray_sum(c)))
                if sig is not None and sig in o.base.subfans[p]:
                    expected.append(c)
        else:
            expected = actual
        proj_actual = {Cone._from_extreme_rays(n, [r[:-1] for r in c.rays]): c for c in actual}
        proj_expected = {Cone._from_extreme_rays(n, [r[:-1] for r in c.rays]): c for c in expected}
        ok = len(proj_actual) == len(actual) and set(proj_actual) == set(proj_expected)
        bij.append((p, ok))
        if not ok and witness is None:
            bad = sorted(set(proj_actual) ^ set(proj_expected))
            cone = (proj_actual.get(bad[0]) or proj_expected.get(bad[0])) if bad else actual[0]
            witness = (p, cone)
        # commutation: slice of the chart fan equals the chart of the slice
        if any(b[-1] != 0 for b in ms.sublattices[p].basis):
            comm.append((p, False))
            witness = witness or (p, None)
            continue
        q1 = ms.chart_map(p)
        inner = Sublattice.spanned_by(n, [b[:-1] for b in ms.sublattices[p].basis])
        q0 = _chart_map_cached(inner)
        m = q1.target_rank
        block = tuple(tuple(r) + (0,) for r in q0.matrix) + ((0,) * n + (1,),)
        if q1.matrix != block:
            comm.append((p, False))
            witness = witness or (p, None)
            continue
        pr_chart = projection_first(m - 1)
        lhs = set()
        for c in ms.subfans[p].cones:
            ic = image(c, q1)
            if _height_zero(ic):
                lhs.add(image(ic, pr_chart))
        rhs = {image(c, q0) for c in proj_expected}
        ok2 = lhs == rhs
        comm.append((p, ok2))
        if not ok2 and witness is None:
            witness = (p, sorted(lhs ^ rhs)[0])
    passed = all(ok for _, ok in bij) and all(ok for _, ok in comm)
    return CorrespondenceReport(passed, witness, tuple(bij), tuple(comm))


# ---------------------------------------------------------------------------
# charted functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartedFunction:
    """Chart polynomials g_φ over the dual of N/N_φ (canonical coordinates).

    The function itself is χ^{m_φ} · g_φ on each chart, where the optional
    unit exponent m_φ lies in M; units of the open torus part are monomials,
    so this records f / g_φ exactly.  Missing units are zero.
    """

    charts: Mapping[str, LaurentPoly]
    units: Mapping[str, Vector] = field(default_factory=dict)

    def unit(self, p: str, rank_: int) -> Vector:
        return tuple(self.units.get(p, (0,) * rank_))

    def value_at(self, ms: "MockStructure", p: str, v: Sequence[int]):
        """val of χ^{m_φ} g_φ at v, computed in chart φ."""
        return val_eval(self.charts[p], ms.chart_map(p)(v)) + dot(v, self.unit(p, ms.rank))

    @classmethod
    def from_bases(cls, ms: MockStructure, data: Mapping[str, tuple[LaurentPoly, Sequence[Sequence[int]]]],
                   units: Mapping[str, Sequence[int]] | None = None) -> "ChartedFunction":
        """Charts given in arbitrary bases of M ∩ N_φ^⊥ (rows of ``basis``)."""
        out = {}
        for p, (poly, basis) in data.items():
            q = ms.chart_map(p)
            rows = [tuple(r) for r in basis]
            if len(rows) != q.target_rank or rank(rows) != len(rows):
                raise MockStructureError(f"chart basis of {p!r} has the wrong rank", witness=(p,))
            qt = transpose(q.matrix) if q.matrix else []
            terms = {}
            for e, c in poly.terms.items():
                m = tuple(sum(k * r[i] for k, r in zip(e, rows)) for i in range(ms.rank))
                x = solve_rational(qt, list(m)) if qt else ()
                if x is None or any(t.denominator != 1 for t in x):
                    raise MockStructureError(f"chart basis of {p!r} is not in N_φ^⊥", witness=(p,))
                terms[tuple(int(t) for t in x)] = c
            out[p] = LaurentPoly(q.target_rank, terms)
            if abs(_det(rows, q)) != 1:
                raise MockStructureError(f"chart basis of {p!r} does not generate M_φ", witness=(p,))
        return cls(out, {p: tuple(m) for p, m in (units or {}).items() if any(m)})


def _det(rows, q: LatticeMap) -> int:
    """Index of the span of ``rows`` inside the row lattice of q."""
    qt = transpose(q.matrix)
    coords = [[int(t) for t in solve_rational(qt, list(r))] for r in rows]
    return determinant(coords)


def _admissible(ms: MockStructure, cf: ChartedFunction, v: Sequence[int]) -> list[str]:
    return [p for p in ms.phi if p in cf.charts and ms.subfans[p].in_support(v)]


def mock_val_eval(ms: MockStructure, cf: ChartedFunction, v: Sequence[int]):
    """val of the charted function at v, asserting agreement of all charts."""
    ps = _admissible(ms, cf, v)
    if not ps:
        raise MockStructureError(f"{tuple(v)} lies in no chart support", witness=(tuple(v),))
    vals = {p: cf.value_at(ms, p, v) for p in ps}
    if len(set(vals.values())) > 1:
        raise InconsistentChartsError(f"charts disagree at {tuple(v)}: {vals}", witness=(tuple(v), vals))
    return next(iter(vals.values()))


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    points_checked: int
    witness: tuple | None = None


def check_consistency(ms: MockStructure, cf: ChartedFunction, height: int = 3) -> ConsistencyReport:
    """Compare charts at lattice points of max-norm <= ``height`` and at ray
    generators lying in two or more chart supports."""
    pts = set(ms.fan.rays)
    if ms.rank <= 4:
        pts.update(product(range(-height, height + 1), repeat=ms.rank))
    checked = 0
    for v in sorted(pts):
        ps = _admissible(ms, cf, v)
        if len(ps) < 2:
            continue
        checked += 1
        vals = {p: cf.value_at(ms, p, v) for p in ps}
        if len(set(vals.values())) > 1:
            return ConsistencyReport(False, checked, (v, tuple(sorted(vals.items()))))
    return ConsistencyReport(True, checked)


def _first_chart(ms: MockStructure, cf: ChartedFunction, c: Cone) -> str:
    for p in ms.phi:
        if p in cf.charts and c in ms.subfans[p]:
            return p
    raise MockStructureError(f"no chart function covers {c}", witness=(c,))


def _pull_back_cone(region: Cone, q: LatticeMap, span_basis: Sequence[Sequence[int]], n: int) -> Cone:
    """Preimage in span(σ) of a cone inside q(σ); q is injective on span(σ)."""
    qb = [q(b) for b in span_basis]
    a = transpose(qb) if qb else []
    rays = []
    for r in region.rays:
        lam = solve_rational(a, list(r))
        if lam is None:
            raise MockStructureError("region leaves the chart image")  # pragma: no cover
        rays.append(primitive(tuple(sum(l * b[i] for l, b in zip(lam, span_basis)) for i in range(n))))
    return Cone._from_extreme_rays(n, rays)


def mock_refine_along(ms: MockStructure, cf: ChartedFunction) -> Fan:
    """Δ_f: the refinement of Δ along the valuation of a charted function."""
    rep = check_consistency(ms, cf)
    if not rep.consistent:
        raise InconsistentChartsError("chart functions are inconsistent", witness=rep.witness)
    cones: set[Cone] = set()
    for s in ms.fan.maximal_cones:
        p = _first_chart(ms, cf, s)
        q = ms.chart_map(p)
        basis = saturate_rows(s.rays, ms.rank)
        for reg in linearity_regions(cf.charts[p], image(s, q)):
            cones.add(_pull_back_cone(reg.cone, q, basis, ms.rank))
    sets = [c.ray_set for c in cones]
    maximal = [c for c in cones if not any(c.ray_set < t for t in sets)]
    return fan_validate(sorted(maximal), ms.rank)


@dataclass(frozen=True)
class MockFineness:
    fine: bool
    certificates: tuple[tuple[Cone, str, Vector | None], ...]


def mock_fineness(ms: MockStructure, cf: ChartedFunction, fan: Fan | None = None) -> MockFineness:
    """Per-cone fineness certificates, computed in the first admissible chart.

    ``fan`` defaults to Δ; pass a refinement (e.g. from
    :func:`mock_refine_along`) together with a structure pulled back to it.
    """
    fan = fan or ms.fan
    out = []
    for c in fan.cones:
        p = _first_chart(ms, cf, c)
        out.append((c, p, fineness_certificate(cf.charts[p], image(c, ms.chart_map(p)))))
    return MockFineness(all(x is not None for _, _, x in out), tuple(out))


def _transition(src: LatticeMap, dst: LatticeMap) -> list[list[int]]:
    """Unimodular T with dst = T·src (both surjections with equal kernels)."""
    t = dst.compose(src.right_inverse())
    if t.compose(src) != dst:
        raise MockStructureError("chart and orbit quotients have different kernels")
    t_rows = [list(r) for r in t.matrix]
    if t_rows:
        inverse_unimodular(t_rows)
    return t_rows


def mock_restrict_orbit(ms: MockStructure, cf: ChartedFunction, s: Cone,
                        certs: Mapping[str, Sequence[int]] | None = None) -> tuple[MockStructure, ChartedFunction]:
    """Restrict a charted function to the orbit closure of ``s``.

    Returns the induced structure together with the face charts expressed in
    its chart coordinates.
    """
    induced = induce_orbit(ms, s)
    _, qs = star_quotient(ms.fan, s)
    out, shifts = {}, {}
    for p in induced.phi:
        if p not in cf.charts:
            continue
        qp = ms.chart_map(p)
        sp = image(s, qp)
        cert = None if certs is None else certs.get(p)
        if cert is None:
            cert = fineness_certificate(cf.charts[p], sp)
        if cert is None:
            raise MockStructureError(f"no fineness certificate for chart {p!r} along {s}", witness=(p, s))
        h, basis = restrict_to_orbit(cf.charts[p], sp, cert)
        shifts[p] = tuple(a - b for a, b in zip(qp.dual()(cert), cf.unit(p, ms.rank)))
        qa = LatticeMap(basis, qp.target_rank, len(basis)) if basis else LatticeMap.zero(qp.target_rank, 0)
        chart_side = qa.compose(qp)
        induced_side = induced.chart_map(p).compose(qs)
        t = _transition(chart_side, induced_side)
        if t:
            tinv_t = transpose(inverse_unimodular(t))
            terms = {tuple(sum(tinv_t[i][j] * e[j] for j in range(len(e))) for i in range(len(e))): c
                     for e, c in h.terms.items()}
        else:
            terms = dict(h.terms)
        out[p] = LaurentPoly(induced.chart_map(p).target_rank, terms)
    # χ^{shift_p} f restricts to the face chart of p; the first one is the
    # reference function, the others differ by monomials in s^⊥
    units = {}
    if shifts:
        ref = shifts[next(iter(shifts))]
        for p, a in shifts.items():
            m = tuple(x - y for x, y in zip(ref, a))
            c = solve_rational(transpose(qs.matrix), list(m)) if qs.matrix else ()
            if any(c):
                units[p] = tuple(int(x) for x in c)
    return induced, ChartedFunction(out, units)


def mock_pullback(ms: MockStructure, cf: ChartedFunction, pi: LatticeMap, section: LatticeMap
                  ) -> ChartedFunction:
    """Transport chart functions along π : N' -> N with section s."""
    out = {}
    for p, g in cf.charts.items():
        qp = ms.chart_map(p)
        new_sub = Sublattice.spanned_by(pi.source_rank, [section(b) for b in ms.sublattices[p].basis])
        qn = _chart_map_cached(new_sub)
        chart_pi = qp.compose(pi).compose(qn.right_inverse())
        out[p] = pullback(g, chart_pi)
    units = {p: pi.dual()(m) for p, m in cf.units.items()}
    return ChartedFunction(out, units)
