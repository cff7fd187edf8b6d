"""Laurent polynomials over Q and their piecewise-linear valuation functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cone import Cone, ConeError, cone_from_inequalities, cone_from_rays, dual, faces
from .fan import Fan, fan_validate
from .lattice import (
    LatticeError,
    LatticeMap,
    Sublattice,
    Vector,
    dot,
    primitive,
    quotient_map,
    saturate_rows,
    solve_rational,
    transpose,
)


class ValuationError(ValueError):
    """Valuation of the zero polynomial, or an invalid certificate."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LaurentPoly:
    """A Laurent polynomial: exponent vector -> nonzero rational coefficient."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Vector, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != rank:
                raise ValueError(f"exponent {e} does not have length {rank}")
            acc[e] = acc.get(e, Fraction(0)) + _frac(c)
        self.rank = rank
        self.terms: dict[Vector, Fraction] = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def constant(cls, rank: int, c=1) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: c})

    @property
    def support(self) -> tuple[Vector, ...]:
        return tuple(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, tuple(self.terms.items())))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.rank, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return LaurentPoly(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        out = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return LaurentPoly(self.rank, out)

    def __pow__(self, k: int) -> "LaurentPoly":
        out = LaurentPoly.constant(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, omega: Sequence[int]) -> "LaurentPoly":
        """χ^omega · self."""
        return LaurentPoly(self.rank, {tuple(a + b for a, b in zip(e, omega)): c
                                       for e, c in self.terms.items()})

    def toric_derivative(self, i: int) -> "LaurentPoly":
        """x_i ∂/∂x_i."""
        return LaurentPoly(self.rank, {e: c * e[i] for e, c in self.terms.items()})

    def evaluate(self, point: Sequence, modulus: int | None = None):
        """Value at a torus point; with ``modulus`` the arithmetic is in F_p."""
        if modulus is None:
            total = Fraction(0)
            for e, c in self.terms.items():
                term = c
                for x, k in zip(point, e):
                    term *= Fraction(x) ** k
                total += term
            return total
        p = modulus
        total = 0
        for e, c in self.terms.items():
            term = c.numerator * pow(c.denominator, -1, p) % p
            for x, k in zip(point, e):
                term = term * pow(x, k, p) % p
            total = (total + term) % p
        return total

    def __repr__(self):
        return f"LaurentPoly({self.rank}, {dict(self.terms)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = _var_names(self.rank)
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _var_names(rank: int) -> list[str]:
    if rank <= 3:
        return ["x", "y", "z"][:rank]
    return [f"x{i + 1}" for i in range(rank)]


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------


def val_eval(f: LaurentPoly, v: Sequence) -> Fraction | int:
    """min over the support of <v, ω>."""
    if f.is_zero():
        raise ValuationError("valuation of the zero polynomial is undefined")
    return min(dot(v, w) for w in f.terms)


def argmin_support(f: LaurentPoly, v: Sequence) -> tuple[Vector, ...]:
    m = val_eval(f, v)
    return tuple(w for w in f.terms if dot(v, w) == m)


def val_cone(f: LaurentPoly, s: Cone) -> Cone:
    """The cone {(v, a) : v in s, a >= -val(v)} in N ⊕ Z."""
    if f.is_zero():
        raise ValuationError("valuation of the zero polynomial is undefined")
    ds = dual(s)
    gens = [tuple(w) + (0,) for w in ds.rays]
    for l in ds.lineality:
        gens.append(tuple(l) + (0,))
        gens.append(tuple(-x for x in l) + (0,))
    gens += [tuple(w) + (1,) for w in f.terms]
    return dual(cone_from_rays(gens, s.rank + 1))


def integral_witness(c: Cone, omega: Sequence) -> Vector:
    """An integer ω₀ agreeing with the rational functional ``omega`` on span(c),
    provided ``omega`` takes integer values on span(c) ∩ N."""
    n = c.rank
    basis = saturate_rows(list(c.rays) + list(c.lineality), n)
    if all(Fraction(x).denominator == 1 for x in omega):
        return tuple(int(x) for x in omega)
    values = [sum(Fraction(a) * b for a, b in zip(omega, p)) for p in basis]
    if any(v.denominator != 1 for v in values):
        raise ValuationError("functional is not integral on the span lattice")
    if not basis:
        return (0,) * n
    m = LatticeMap.from_rows(basis, n)
    rinv = m.right_inverse()
    return tuple(int(x) for x in rinv([int(v) for v in values]))


@dataclass(frozen=True)
class LinearityRegion:
    cone: Cone
    witness_exponent: Vector
    integral_witness: Vector


def linearity_regions(f: LaurentPoly, s: Cone) -> list[LinearityRegion]:
    """Domains of linearity of v -> val(f, v) on the cone ``s``, with faces.

    Each region is tagged with the lexicographically smallest support
    exponent attaining the minimum on all of it.
    """
    if not s.is_strongly_convex():
        raise ConeError("linearity_regions requires a strongly convex cone")
    if f.is_zero():
        raise ValuationError("valuation of the zero polynomial is undefined")
    d = s.dim
    supp = f.support
    cells: dict[Vector, Cone] = {}
    for w in supp:
        ineqs = list(s.facets) + [tuple(a - b for a, b in zip(w2, w)) for w2 in supp if w2 != w]
        c = cone_from_inequalities(ineqs, s.equations, s.rank)
        if c.dim == d:
            cells[w] = c
    seen: dict[Cone, Vector] = {}
    for w, c in cells.items():
        for fc in faces(c):
            if fc not in seen or w < seen[fc]:
                seen[fc] = w
    return [LinearityRegion(c, w, integral_witness(c, w)) for c, w in sorted(seen.items())]


def refine_along(d: Fan, f: LaurentPoly) -> Fan:
    """Δ_f: the coarsest refinement of ``d`` on whose cones val(f, ·) is linear."""
    cones: set[Cone] = set()
    for s in d.maximal_cones:
        for r in linearity_regions(f, s):
            cones.add(r.cone)
    sets = [c.ray_set for c in cones]
    maximal = [c for c in cones if not any(c.ray_set < t for t in sets)]
    return fan_validate(sorted(maximal), d.rank)


def fineness_certificate(f: LaurentPoly, s: Cone) -> Vector | None:
    """An ω with <v, ω> + val(f, v) = 0 on all of ``s``, or None.

    A common minimiser ω_j of all ray generators makes val linear on s (it
    is a lower bound by concavity of a minimum of linear forms and an upper
    bound by definition); conversely linearity forces such a common
    minimiser at a generic interior point.  Among the candidates -ω_j the
    lexicographically smallest is returned.
    """
    if not s.is_strongly_convex():
        raise ConeError("fineness_certificate requires a strongly convex cone")
    common = set(f.support)
    for r in s.rays:
        common &= set(argmin_support(f, r))
        if not common:
            return None
    return min(tuple(-x for x in w) for w in common)


@dataclass(frozen=True)
class FinenessReport:
    fine: bool
    certificates: tuple[tuple[Cone, Vector | None], ...]

    def certificate(self, c: Cone) -> Vector | None:
        return dict(self.certificates)[c]


def is_fine_fan(d: Fan, f: LaurentPoly) -> FinenessReport:
    certs = tuple((c, fineness_certificate(f, c)) for c in d.cones)
    return FinenessReport(all(x is not None for _, x in certs), certs)


def check_certificate(f: LaurentPoly, s: Cone, cert: Sequence[int]) -> bool:
    """Does χ^cert · f have nonnegative valuation on s, vanishing along s?"""
    g = f.shift(cert)
    if any(dot(r, e) < 0 for r in s.rays for e in g.terms):
        return False
    return any(all(dot(r, e) == 0 for r in s.rays) for e in g.terms)


def orbit_dual_basis(s: Cone) -> tuple[Vector, ...]:
    """Basis of M ∩ s^⊥ matching the coordinates of :func:`star_quotient`."""
    sub = Sublattice(s.rank, tuple(saturate_rows(s.rays, s.rank)))
    return quotient_map(sub).matrix


def restrict_to_orbit(f: LaurentPoly, s: Cone, cert: Sequence[int]) -> tuple[LaurentPoly, tuple[Vector, ...]]:
    """Face polynomial of f along s, in coordinates of a basis of M ∩ s^⊥."""
    if not check_certificate(f, s, cert):
        raise ValuationError(f"{tuple(cert)} is not a fineness certificate on {s}")
    g = f.shift(cert)
    basis = orbit_dual_basis(s)
    bt = transpose(basis) if basis else []
    out = {}
    for e, c in g.terms.items():
        if all(dot(r, e) == 0 for r in s.rays):
            if basis:
                x = solve_rational(bt, list(e))
                out[tuple(int(t) for t in x)] = c
            else:
                out[()] = c
    return LaurentPoly(len(basis), out), basis


def pullback(f: LaurentPoly, a: LatticeMap) -> LaurentPoly:
    """Exponents transported by the dual of the surjection a : N' -> N."""
    if a.target_rank != f.rank:
        raise LatticeError("map target rank differs from polynomial rank")
    if not a.is_surjective():
        raise LatticeError("pullback requires a surjective lattice map")
    at = a.dual()
    return LaurentPoly(a.source_rank, {at(e): c for e, c in f.terms.items()})


@dataclass(frozen=True)
class FiberPoly:
    """Polynomial over M' with coefficients univariate Laurent polynomials in t."""

    rank: int
    terms: tuple[tuple[Vector, tuple[tuple[int, Fraction], ...]], ...]

    @property
    def support(self) -> tuple[Vector, ...]:
        return tuple(e for e, _ in self.terms)

    def coefficient(self, e: Sequence[int]) -> dict[int, Fraction]:
        return dict(dict(self.terms)[tuple(e)])

    def val_eval(self, v: Sequence) -> int:
        return min(dot(v, e) for e in self.support)


def generic_fiber_poly(f: LaurentPoly) -> FiberPoly:
    """Group the terms of f over M' ⊕ Z by their M'-exponent."""
    groups: dict[Vector, dict[int, Fraction]] = {}
    for e, c in f.terms.items():
        groups.setdefault(e[:-1], {})[e[-1]] = c
    return FiberPoly(f.rank - 1, tuple((e, tuple(sorted(g.items()))) for e, g in sorted(groups.items())))


__all__ = [
    "LaurentPoly", "ValuationError", "val_eval", "val_cone", "linearity_regions",
    "LinearityRegion", "refine_along", "fineness_certificate", "is_fine_fan", "FinenessReport",
    "restrict_to_orbit", "pullback", "generic_fiber_poly", "FiberPoly", "integral_witness",
    "check_certificate", "orbit_dual_basis", "argmin_support", "primitive",
]
