"""Rational polyhedral cones with exact V- and H-descriptions.

A :class:`Cone` is stored canonically: primitive extreme rays (taken modulo
the lineality space, projected orthogonally onto its complement), a Hermite
basis of the lineality lattice, primitive inward facet normals lying in the
linear span of the cone, and a Hermite basis of the equations cutting out
that span.  Two cones are equal exactly when rank, rays and lineality agree.

The H-description is computed by incremental double description over the
integers; see :func:`_double_description`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .lattice import (
    LatticeError,
    LatticeMap,
    Vector,
    dot,
    hermite_rows,
    inverse_rational,
    inverse_unimodular,
    invariant_factors,
    kernel_basis,
    matvec,
    primitive,
    rank,
    saturate_rows,
    smith_normal_form,
    solve_rational,
    transpose,
)


class ConeError(ValueError):
    """Unsupported or malformed cone input."""


class Multiplicity(NamedTuple):
    index: int
    is_unimodular: bool


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------


def _independent_rows(rows: Sequence[Sequence[int]]) -> list[int]:
    chosen: list[int] = []
    basis: list[Sequence[int]] = []
    for i, r in enumerate(rows):
        if rank(basis + [r]) > len(basis):
            basis.append(r)
            chosen.append(i)
    return chosen


def _double_description(rows: Sequence[Sequence[int]], k: int) -> list[Vector]:
    """Extreme rays of {y in Q^k : r·y >= 0 for r in rows}.

    ``rows`` must have rank k, so the solution cone is pointed.
    """
    if k == 0:
        return []
    first = _independent_rows(rows)
    if len(first) != k:
        raise ConeError("inequality system is not of full rank")
    a0 = [list(rows[i]) for i in first]
    inv = inverse_rational(a0)
    rays: list[tuple[Vector, frozenset]] = []
    for j in range(k):
        col = [inv[i][j] for i in range(k)]
        tight = frozenset(first[i] for i in range(k) if i != j)
        rays.append((primitive(col), tight))
    done = list(first)
    for idx, row in enumerate(rows):
        if idx in first:
            continue
        pos, zero, neg = [], [], []
        for r, t in rays:
            s = dot(row, r)
            if s > 0:
                pos.append((r, t, s))
            elif s < 0:
                neg.append((r, t, s))
            else:
                zero.append((r, t | {idx}))
        new = []
        for p, tp, sp in pos:
            for q, tq, sq in neg:
                common = tp & tq
                if len(common) < k - 2:
                    continue
                if rank([rows[i] for i in common]) != k - 2:
                    continue
                v = primitive(tuple(sp * b - sq * a for a, b in zip(p, q)))
                new.append((v, common | {idx}))
        rays = [(r, t) for r, t, _ in pos] + zero + new
        done.append(idx)
    out = sorted({r for r, _ in rays})
    return out


def _project_away(v: Sequence[int], basis: Sequence[Sequence[int]]) -> tuple[Fraction, ...]:
    """Orthogonal projection of v onto the complement of span(basis)."""
    if not basis:
        return tuple(Fraction(x) for x in v)
    g = [[Fraction(dot(a, b)) for b in basis] for a in basis]
    ginv = inverse_rational(g)
    rhs = [dot(b, v) for b in basis]
    coeff = [sum(ginv[i][j] * rhs[j] for j in range(len(basis))) for i in range(len(basis))]
    return tuple(Fraction(v[t]) - sum(c * b[t] for c, b in zip(coeff, basis))
                 for t in range(len(v)))


def _h_description(gens: Sequence[Sequence[int]], n: int):
    """Return (rays, lineality, facets, equations) for cone(gens)."""
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        eqs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return (), (), (), tuple(eqs)
    span = saturate_rows(gens, n)
    k = len(span)
    eqs = tuple(kernel_basis(span, n)) if k < n else ()
    # coordinates of generators in the saturated span basis
    pt = transpose(span)
    gram = [[Fraction(dot(a, b)) for b in span] for a in span]
    ginv = inverse_rational(gram)
    coords = set()
    for g in gens:
        rhs = [dot(b, g) for b in span]
        c = tuple(int(sum(ginv[i][j] * rhs[j] for j in range(k))) for i in range(k))
        coords.add(c)
    coord_rows = sorted(coords)
    ys = _double_description(coord_rows, k)
    facets = set()
    for y in ys:
        # functional in span(P) restricting to y on coordinates
        z = [sum(ginv[i][j] * y[j] for j in range(k)) for i in range(k)]
        w = tuple(sum(pt[t][i] * z[i] for i in range(k)) for t in range(n))
        facets.add(primitive(w))
    facets = tuple(sorted(facets))
    if facets or eqs:
        lin = tuple(kernel_basis(list(eqs) + list(facets), n))
    else:
        lin = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    lin = tuple(hermite_rows(lin, n)) if lin else ()
    target = k - len(lin) - 1
    rays = set()
    for g in gens:
        p = primitive(_project_away(g, lin)) if lin else g
        if not any(p):
            continue
        p = primitive(p)
        tight = [f for f in facets if dot(f, p) == 0]
        if rank(tight) == target:
            rays.add(p)
    return tuple(sorted(rays)), lin, facets, eqs


# ---------------------------------------------------------------------------
# Cone
# ---------------------------------------------------------------------------


class Cone:
    """An exact rational polyhedral cone in Q^rank.

    Use :func:`cone_from_rays` (or the other module-level constructors)
    rather than calling the class directly.
    """

    def __init__(self, rank_: int, rays, lineality, facets=None, equations=None):
        self.rank = rank_
        self.rays: tuple[Vector, ...] = tuple(rays)
        self.lineality: tuple[Vector, ...] = tuple(lineality)
        self._facets = facets
        self._equations = equations

    @classmethod
    def _from_extreme_rays(cls, rank_: int, rays: Iterable[Sequence[int]]) -> "Cone":
        """Trusted constructor: ``rays`` are already the primitive extreme
        rays of a strongly convex cone.  Facets are computed on demand."""
        return cls(rank_, sorted(tuple(r) for r in rays), ())

    def _ensure_h(self):
        if self._facets is None:
            _, _, f, e = _h_description(list(self.rays) + list(self.lineality)
                                        + [tuple(-x for x in v) for v in self.lineality],
                                        self.rank)
            self._facets, self._equations = f, e

    @property
    def facets(self) -> tuple[Vector, ...]:
        self._ensure_h()
        return self._facets

    @property
    def equations(self) -> tuple[Vector, ...]:
        self._ensure_h()
        return self._equations

    # identity -----------------------------------------------------------
    @cached_property
    def key(self):
        return (self.rank, self.rays, self.lineality)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other: "Cone"):
        return (self.dim, self.rays, self.lineality) < (other.dim, other.rays, other.lineality)

    def __repr__(self):
        lin = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"Cone(rank={self.rank}, rays={list(self.rays)}{lin})"

    # basic queries ------------------------------------------------------
    @cached_property
    def dim(self) -> int:
        if self._equations is not None:
            return self.rank - len(self._equations)
        return rank(list(self.rays) + list(self.lineality))

    @property
    def ray_set(self) -> frozenset:
        return frozenset(self.rays)

    def is_strongly_convex(self) -> bool:
        return not self.lineality

    def is_simplicial(self) -> bool:
        return self.is_strongly_convex() and len(self.rays) == self.dim

    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    def contains(self, v: Sequence) -> bool:
        if any(dot(e, v) != 0 for e in self.equations):
            return False
        return all(dot(f, v) >= 0 for f in self.facets)

    def relint_contains(self, v: Sequence) -> bool:
        if any(dot(e, v) != 0 for e in self.equations):
            return False
        return all(dot(f, v) > 0 for f in self.facets)

    def contains_cone(self, other: "Cone") -> bool:
        if not all(self.contains(r) for r in other.rays):
            return False
        return all(self.contains(l) and self.contains(tuple(-x for x in l)) for l in other.lineality)

    def interior_point(self) -> Vector:
        """Sum of the rays (a relative-interior point for pointed cones)."""
        return tuple(sum(r[i] for r in self.rays) for i in range(self.rank))

    def is_face_of(self, other: "Cone") -> bool:
        """Is ``self`` a face of the strongly convex cone ``other``?"""
        if self.rank != other.rank or self.lineality or other.lineality:
            return False
        if not self.ray_set <= other.ray_set:
            if not other.contains_cone(self):
                return False
        tight = [f for f in other.facets if all(dot(f, r) == 0 for r in self.rays)]
        face_rays = frozenset(r for r in other.rays if all(dot(f, r) == 0 for f in tight))
        return face_rays == self.ray_set


def cone_from_rays(rays: Iterable[Sequence[int]], rank_: int | None = None) -> Cone:
    """Canonical cone generated by ``rays``.

    Parameters
    ----------
    rays : iterable of integer (or rational) vectors
        Generators.  Non-extreme generators, duplicates and zero vectors are
        discarded.
    rank_ : int, optional
        Ambient rank; required when ``rays`` is empty.
    """
    gens = [primitive(r) for r in rays]
    if rank_ is None:
        if not gens:
            raise ConeError("ambient rank needed for an empty generator list")
        rank_ = len(gens[0])
    if any(len(g) != rank_ for g in gens):
        raise ConeError("generators do not share the ambient rank")
    r, lin, f, e = _h_description(gens, rank_)
    return Cone(rank_, r, lin, f, e)


def zero_cone(rank_: int) -> Cone:
    return cone_from_rays([], rank_)


def full_space(rank_: int) -> Cone:
    gens = []
    for i in range(rank_):
        e = [0] * rank_
        e[i] = 1
        gens.append(tuple(e))
        gens.append(tuple(-x for x in e))
    return cone_from_rays(gens, rank_)


def dual(c: Cone) -> Cone:
    """The dual cone {w : <w, x> >= 0 for all x in c}."""
    gens = list(c.facets) + list(c.equations) + [tuple(-x for x in e) for e in c.equations]
    return cone_from_rays(gens, c.rank)


def cone_from_inequalities(ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]] = (),
                           rank_: int | None = None) -> Cone:
    """{x : <a, x> >= 0 for a in ineqs, <b, x> = 0 for b in eqs}."""
    ineqs = [tuple(a) for a in ineqs]
    eqs = [tuple(b) for b in eqs]
    if rank_ is None:
        rank_ = len((ineqs + eqs)[0])
    gens = ineqs + eqs + [tuple(-x for x in b) for b in eqs]
    return dual(cone_from_rays(gens, rank_))


def intersect(a: Cone, b: Cone) -> Cone:
    if a.rank != b.rank:
        raise ConeError("cones live in different ambient lattices")
    if a == b:
        return a
    if not a.lineality and not b.lineality:
        common = a.ray_set & b.ray_set
        if rank(list(a.ray_set | b.ray_set)) == len(a.ray_set | b.ray_set):
            return Cone._from_extreme_rays(a.rank, common)
    return cone_from_inequalities(list(a.facets) + list(b.facets),
                                  list(a.equations) + list(b.equations), a.rank)


def image(c: Cone, m: LatticeMap) -> Cone:
    if m.source_rank != c.rank:
        raise ConeError("map source rank differs from cone rank")
    gens = [m(r) for r in c.rays]
    for l in c.lineality:
        im = m(l)
        gens.append(im)
        gens.append(tuple(-x for x in im))
    return cone_from_rays(gens, m.target_rank)


def faces(c: Cone) -> list[Cone]:
    """All faces of a strongly convex cone, sorted by (dim, rays)."""
    if not c.is_strongly_convex():
        raise ConeError("faces() requires a strongly convex cone")
    top = c.ray_set
    incid = [frozenset(r for r in c.rays if dot(f, r) == 0) for f in c.facets]
    seen = {top}
    frontier = [top]
    while frontier:
        nxt = []
        for s in frontier:
            for inc in incid:
                t = s & inc
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    out = []
    for s in seen:
        if s == top:
            out.append(c)
        else:
            out.append(Cone._from_extreme_rays(c.rank, s))
    return sorted(out)


def multiplicity(c: Cone) -> Multiplicity:
    """Index of the lattice spanned by the rays in its saturation."""
    if not c.is_simplicial():
        raise ConeError("multiplicity is defined for simplicial cones only")
    if not c.rays:
        return Multiplicity(1, True)
    idx = 1
    for d in invariant_factors([list(r) for r in c.rays]):
        idx *= d
    return Multiplicity(idx, idx == 1)


def parallelepiped_points(rays: Sequence[Sequence[int]], n: int) -> list[tuple[tuple[Fraction, ...], Vector]]:
    """Lattice points Σ λ_i r_i with 0 <= λ_i < 1 of the span lattice of the
    linearly independent ``rays``, as (λ, point) pairs (zero included).

    Coset representatives of Z^k modulo the ray lattice come from the Smith
    form of the ray coordinates; each is folded back by fractional parts.
    """
    rays = [list(r) for r in rays]
    k = len(rays)
    if k == 0:
        return [((), (0,) * n)]
    basis = saturate_rows(rays, n)
    bt = transpose(basis)
    a = []
    for r in rays:
        x = solve_rational(bt, r)
        a.append([int(t) for t in x])
    _, d, vmat = smith_normal_form(a)
    vinv = inverse_unimodular(vmat)
    ainv = inverse_rational(a)
    divisors = [d[i][i] for i in range(k)]
    out = []
    for z in product(*(range(m) for m in divisors)):
        x = [sum(z[i] * vinv[i][j] for i in range(k)) for j in range(k)]
        lam = [sum(x[i] * ainv[i][j] for i in range(k)) for j in range(k)]
        lam = tuple(l - (l.numerator // l.denominator) for l in lam)
        pt = tuple(int(sum(lam[i] * rays[i][t] for i in range(k))) for t in range(n))
        out.append((lam, pt))
    return sorted(out, key=lambda p: p[1])


def is_unimodular(c: Cone) -> bool:
    return c.is_simplicial() and multiplicity(c).is_unimodular


def all_faces_of(cones: Iterable[Cone]) -> set[Cone]:
    out: set[Cone] = set()
    for c in cones:
        out.update(faces(c))
    return out


def rays_of_subset_face(c: Cone, subset: Iterable[Vector]) -> Cone:
    """Smallest face of the strongly convex cone ``c`` containing ``subset``."""
    subset = list(subset)
    tight = [f for f in c.facets if all(dot(f, r) == 0 for r in subset)]
    return Cone._from_extreme_rays(c.rank, [r for r in c.rays if all(dot(f, r) == 0 for f in tight)])


def pairing_matrix(c: Cone) -> list[list[int]]:
    """Facet-by-ray pairing table (used by tests and the verifier)."""
    return [[dot(f, r) for r in c.rays] for f in c.facets]


__all__ = [
    "Cone", "ConeError", "Multiplicity", "cone_from_rays", "cone_from_inequalities",
    "zero_cone", "full_space", "dual", "intersect", "image", "faces", "multiplicity",
    "is_unimodular", "all_faces_of", "rays_of_subset_face", "matvec", "LatticeError",
]
