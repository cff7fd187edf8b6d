"""Fans and fan surgery.

A :class:`Fan` keeps every face explicitly.  Because all cones of a fan are
faces of one another exactly when their ray sets are nested, most
combinatorial questions reduce to set operations on ray tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .cone import Cone, cone_from_rays, faces, image, intersect, multiplicity, parallelepiped_points
from .lattice import (
    LatticeMap,
    Sublattice,
    Vector,
    dot,
    primitive,
    quotient_map,
    saturate_rows,
)


class FanError(ValueError):
    """A collection of cones violating the fan axioms, or a misuse of a fan."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Fan:
    """A validated fan; ``cones`` lists all faces sorted by (dim, rays)."""

    def __init__(self, rank: int, cones: Iterable[Cone]):
        self.rank = rank
        self.cones: tuple[Cone, ...] = tuple(sorted(set(cones)))
        self._set = frozenset(self.cones)
        self._by_rays = {c.ray_set: c for c in self.cones}

    @classmethod
    def from_cones(cls, rank: int, cones: Iterable[Cone]) -> "Fan":
        """Face-complete a collection known to satisfy the fan axioms."""
        out: set[Cone] = set()
        for c in cones:
            if c not in out:
                out.update(faces(c))
        if not out:
            out.add(Cone._from_extreme_rays(rank, ()))
        return cls(rank, out)

    # containers -----------------------------------------------------------
    def __contains__(self, c: Cone) -> bool:
        return c in self._set

    def __iter__(self):
        return iter(self.cones)

    def __len__(self):
        return len(self.cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self.rank == other.rank and self._set == other._set

    def __hash__(self):
        return hash((self.rank, self._set))

    def __repr__(self):
        return f"Fan(rank={self.rank}, cones={len(self.cones)}, maximal={len(self.maximal_cones)})"

    def cone_with_rays(self, rays: Iterable[Vector]) -> Cone | None:
        return self._by_rays.get(frozenset(rays))

    @property
    def maximal_cones(self) -> tuple[Cone, ...]:
        if not hasattr(self, "_maximal"):
            sets = [c.ray_set for c in self.cones]
            self._maximal = tuple(c for c in self.cones
                                  if not any(c.ray_set < s for s in sets))
        return self._maximal

    @property
    def rays(self) -> tuple[Vector, ...]:
        return tuple(sorted(c.rays[0] for c in self.cones if len(c.rays) == 1))

    @property
    def dim(self) -> int:
        return max(c.dim for c in self.cones)

    def index(self, c: Cone) -> int:
        return self.cones.index(c)

    def in_support(self, v: Sequence) -> bool:
        return any(c.contains(v) for c in self.maximal_cones)

    def is_simplicial(self) -> bool:
        return all(c.is_simplicial() for c in self.maximal_cones)

    def is_unimodular(self) -> bool:
        return all(c.is_simplicial() and multiplicity(c).is_unimodular for c in self.maximal_cones)

    def containing(self, c: Cone) -> list[Cone]:
        """Cones of the fan having ``c`` as a face."""
        return [t for t in self.cones if c.ray_set <= t.ray_set]


def fan_validate(cones: Iterable[Cone], rank: int | None = None) -> Fan:
    """Check the fan axioms and return the face-completed :class:`Fan`.

    Raises
    ------
    FanError
        If some cone is not strongly convex, ranks differ, or two cones meet
        in something that is not a common face.  ``witness`` names the pair.
    """
    cones = list(dict.fromkeys(cones))
    if rank is None:
        if not cones:
            raise FanError("empty cone list needs an explicit rank")
        rank = cones[0].rank
    for c in cones:
        if c.rank != rank:
            raise FanError("cones live in different lattices", witness=(c,))
        if not c.is_strongly_convex():
            raise FanError("cone is not strongly convex", witness=(c,))
    # only maximal-by-containment inputs need pairwise checks, but cones
    # with nested ray sets can still meet badly, so test every input pair
    for a, b in combinations(cones, 2):
        i = intersect(a, b)
        if not (i.is_face_of(a) and i.is_face_of(b)):
            raise FanError(f"cones {a} and {b} do not meet in a common face", witness=(a, b))
    return Fan.from_cones(rank, cones)


def minimal_containing_cone(f: Fan, v: Sequence) -> Cone | None:
    """The cone of ``f`` whose relative interior contains ``v``."""
    for c in f.maximal_cones:
        if c.contains(v):
            tight = [n for n in c.facets if dot(n, v) == 0]
            rays = [r for r in c.rays if all(dot(n, r) == 0 for n in tight)]
            return f.cone_with_rays(rays)
    return None


def _cones_inside(f: Fan, s: Cone) -> list[Cone]:
    return [c for c in f.cones if all(s.contains(r) for r in c.rays)]


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    """Equal supports and every cone of ``fine`` inside a cone of ``coarse``."""
    if fine.rank != coarse.rank:
        return False
    for c in fine.maximal_cones:
        if not any(s.contains_cone(c) for s in coarse.maximal_cones):
            return False
    for s in coarse.maximal_cones:
        d = s.dim
        inside = _cones_inside(fine, s)
        top = [c for c in inside if c.dim == d]
        if not top:
            return False
        for w in inside:
            if w.dim != d - 1:
                continue
            on_boundary = any(all(dot(n, r) == 0 for r in w.rays) for n in s.facets)
            if on_boundary:
                continue
            if sum(1 for t in top if w.ray_set <= t.ray_set) != 2:
                return False
    return True


def product_fan(a: Fan, b: Fan) -> Fan:
    n, m = a.rank, b.rank
    cones = []
    for s in a.maximal_cones:
        for t in b.maximal_cones:
            rays = [tuple(r) + (0,) * m for r in s.rays] + [(0,) * n + tuple(r) for r in t.rays]
            cones.append(Cone._from_extreme_rays(n + m, rays))
    return Fan.from_cones(n + m, cones)


def _require_member(f: Fan, s: Cone):
    if s not in f:
        raise FanError(f"{s} is not a cone of the fan", witness=(s,))


def star_subfan(f: Fan, s: Cone) -> Fan:
    """All cones γ for which γ ∪ s lies in a single cone of ``f``."""
    _require_member(f, s)
    tops = [t.ray_set for t in f.cones if s.ray_set <= t.ray_set]
    return Fan(f.rank, [g for g in f.cones if any((g.ray_set | s.ray_set) <= t for t in tops)])


def star_quotient(f: Fan, s: Cone) -> tuple[Fan, LatticeMap]:
    """Images of the cones containing ``s`` in N / (span(s) ∩ N)."""
    _require_member(f, s)
    sub = Sublattice(f.rank, tuple(saturate_rows(s.rays, f.rank)))
    q = quotient_map(sub)
    imgs = [image(t, q) for t in f.cones if s.ray_set <= t.ray_set]
    tops = [image(t, q) for t in f.maximal_cones if s.ray_set <= t.ray_set]
    fan = fan_validate(tops, q.target_rank)
    assert set(imgs) == set(fan.cones)
    return fan, q


@dataclass(frozen=True)
class SliceResult:
    height_zero: Fan
    projected: Fan
    correspondence: tuple[tuple[Cone, Cone], ...]


def _check_upper(f: Fan):
    for c in f.cones:
        if any(r[-1] < 0 for r in c.rays) or c.lineality:
            raise FanError(f"cone {c} leaves the upper half-space", witness=(c,))


def projection_first(n: int) -> LatticeMap:
    """pr_1 : Z^n ⊕ Z -> Z^n."""
    return LatticeMap.from_rows([[int(i == j) for j in range(n + 1)] for i in range(n)], n + 1)


def slice_and_project(f: Fan) -> SliceResult:
    """Height-zero subfan of a fan over the half-line, and its projection."""
    _check_upper(f)
    n = f.rank - 1
    zero = [c for c in f.cones if all(r[-1] == 0 for r in c.rays)]
    corr = tuple((c, Cone._from_extreme_rays(n, [r[:-1] for r in c.rays])) for c in zero)
    return SliceResult(Fan(f.rank, zero), Fan(n, [p for _, p in corr]), corr)


def stellar_subdivide(f: Fan, v: Sequence[int]) -> Fan:
    """Stellar subdivision of ``f`` at the lattice point ``v``."""
    v = primitive(v)
    if not any(v):
        raise FanError("cannot subdivide at the origin")
    sv = minimal_containing_cone(f, v)
    if sv is None:
        raise FanError(f"{v} lies outside the support", witness=(v,))
    star = [t.ray_set for t in f.cones if sv.ray_set <= t.ray_set]
    kept = [c for c in f.cones if not sv.ray_set <= c.ray_set]
    new = []
    for g in kept:
        if any((g.ray_set | sv.ray_set) <= t for t in star):
            new.append(Cone._from_extreme_rays(f.rank, list(g.rays) + [v]))
    return Fan(f.rank, kept + new)


def _parallelepiped_point(c: Cone) -> Vector:
    """Nonzero lattice point of the half-open fundamental parallelepiped of a
    simplicial cone with minimal coefficient sum (ties: lexicographic)."""
    pts = [(sum(lam), pt) for lam, pt in parallelepiped_points(c.rays, c.rank) if any(lam)]
    return min(pts)[1]


def simplicialize(f: Fan) -> Fan:
    """Pull rays of non-simplicial cones until every cone is simplicial."""
    for _ in range(10_000):
        bad = next((c for c in f.cones if not c.is_simplicial()), None)
        if bad is None:
            return f
        f = stellar_subdivide(f, bad.rays[0])
    raise FanError("simplicialization did not terminate")  # pragma: no cover


def make_unimodular(f: Fan) -> Fan:
    """Unimodular refinement with the same support."""
    f = simplicialize(f)
    for _ in range(100_000):
        bad = next((c for c in f.cones if not multiplicity(c).is_unimodular), None)
        if bad is None:
            return f
        f = stellar_subdivide(f, _parallelepiped_point(bad))
    raise FanError("unimodularization did not terminate")  # pragma: no cover


@dataclass(frozen=True)
class FanPredicateReport:
    spe_cones: tuple[int, ...]
    bdd_cones: tuple[int, ...]
    compactly_arranged: bool
    generically_unimodular: bool
    specifically_reduced: bool
    compactly_arranged_witness: tuple[Cone, Cone, Cone] | None = None
    generically_unimodular_witness: Cone | None = None
    specifically_reduced_witness: Cone | None = None


def shape_predicates(f: Fan) -> FanPredicateReport:
    """Evaluate the shape predicates of a fan over the half-line."""
    _check_upper(f)
    spe = [i for i, c in enumerate(f.cones) if any(r[-1] > 0 for r in c.rays)]
    bdd = [i for i in spe if all(r[-1] > 0 for r in f.cones[i].rays)]
    bdd_sets = [f.cones[i].ray_set for i in bdd]
    all_sets = [c.ray_set for c in f.cones]
    ca_w = None
    for i, j in combinations(range(len(bdd)), 2):
        u = bdd_sets[i] | bdd_sets[j]
        tau = next((s for s in all_sets if u <= s), None)
        if tau is None:
            continue
        if not any(u <= s for s in bdd_sets):
            ca_w = (f.cones[bdd[i]], f.cones[bdd[j]], f.cone_with_rays(tau))
            break
    gu_w = None
    for c in f.cones:
        if all(r[-1] == 0 for r in c.rays):
            if not (c.is_simplicial() and multiplicity(c).is_unimodular):
                gu_w = c
                break
    sr_w = None
    for i in bdd:
        c = f.cones[i]
        if len(c.rays) == 1 and c.rays[0][-1] != 1:
            sr_w = c
            break
    return FanPredicateReport(tuple(spe), tuple(bdd), ca_w is None, gu_w is None, sr_w is None,
                              ca_w, gu_w, sr_w)


# small named fans used throughout --------------------------------------------


def fan_from_maximal(rank: int, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]],
                     validate: bool = True) -> Fan:
    """Build a fan from a ray list and maximal cones given by ray indices."""
    cs = [cone_from_rays([rays[i] for i in idx], rank) for idx in cones]
    if validate:
        return fan_validate(cs, rank)
    return Fan.from_cones(rank, cs)


def half_line() -> Fan:
    """Δ_! : the fan {0, R_{>=0}} in Z."""
    return fan_from_maximal(1, [(1,)], [[0]])


def projective_plane() -> Fan:
    return fan_from_maximal(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


def quadrant() -> Fan:
    return fan_from_maximal(2, [(1, 0), (0, 1)], [[0, 1]])
