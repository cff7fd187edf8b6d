"""Fans and mock toric structures attached to hyperplane arrangements.

The arrangement is a list of d+1 linear forms on k^(n+1).  The lattice
N = Z^(d+1) / Z·(1,…,1) is presented in the basis e_1..e_d, so that
e_0 = -(e_1 + … + e_d).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .cone import Cone
from .fan import Fan, fan_validate, stellar_subdivide
from .lattice import LatticeMap, Sublattice, rank
from .mock import MockStructure, MockStructureError, induce_pullback, verify_conditions


class ArrangementError(ValueError):
    pass


@dataclass(frozen=True)
class Arrangement:
    n: int
    forms: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ArrangementError("projective dimension must be positive")
        for f in self.forms:
            if len(f) != self.n + 1:
                raise ArrangementError(f"form {f} does not have length {self.n + 1}")
            if not any(f):
                raise ArrangementError("zero form in the arrangement")

    @classmethod
    def of(cls, n: int, forms: Iterable[Sequence]) -> "Arrangement":
        return cls(n, tuple(tuple(Fraction(x) for x in f) for f in forms))

    @property
    def d(self) -> int:
        return len(self.forms) - 1

    def rank_of(self, idx: Iterable[int]) -> int:
        return _qrank([self.forms[i] for i in idx])

    def spans(self) -> bool:
        return self.rank_of(range(len(self.forms))) == self.n + 1

    def closure(self, idx: Iterable[int]) -> frozenset[int]:
        idx = list(idx)
        r = self.rank_of(idx)
        return frozenset(i for i in range(len(self.forms)) if self.rank_of(idx + [i]) == r)


def _qrank(rows) -> int:
    if not rows:
        return 0
    den = 1
    for r in rows:
        for x in r:
            den = den * Fraction(x).denominator
    return rank([[int(Fraction(x) * den) for x in r] for r in rows])


@dataclass(frozen=True, order=True)
class Flat:
    dim: int
    members: tuple[int, ...]


def _require_spanning(arr: Arrangement):
    if not arr.spans():
        raise ArrangementError(f"forms do not span the space of linear forms "
                               f"(rank {arr.rank_of(range(len(arr.forms)))} < {arr.n + 1})")


def flats(arr: Arrangement) -> list[Flat]:
    """All proper nonzero flats, sorted by (dim, members)."""
    _require_spanning(arr)
    idx = range(len(arr.forms))
    out: set[Flat] = set()
    for k in range(1, arr.n + 1):
        for sub in combinations(idx, k):
            if arr.rank_of(sub) != k:
                continue
            cl = arr.closure(sub)
            out.add(Flat(k, tuple(sorted(cl))))
    return sorted(out)


def e_vector(d: int, members: Iterable[int]) -> tuple[int, ...]:
    """Σ_{i in members} e_i in the basis e_1..e_d."""
    v = [0] * d
    for i in members:
        if i == 0:
            v = [x - 1 for x in v]
        else:
            v[i - 1] += 1
    return tuple(v)


def chains(fl: Sequence[Flat]) -> list[tuple[Flat, ...]]:
    """All strictly increasing chains of flats, the empty chain included."""
    sets = {f: frozenset(f.members) for f in fl}
    out: list[tuple[Flat, ...]] = [()]

    def grow(chain):
        last = sets[chain[-1]]
        for g in fl:
            if last < sets[g]:
                nxt = chain + (g,)
                out.append(nxt)
                grow(nxt)

    for f in fl:
        out.append((f,))
        grow((f,))
    return out


def _chain_cone(d: int, chain: Sequence[Flat]) -> Cone:
    return Cone._from_extreme_rays(d, [e_vector(d, f.members) for f in chain])


@dataclass(frozen=True)
class BergmanFan:
    fan: Fan
    flats: tuple[Flat, ...]
    chain_cones: tuple[tuple[tuple[Flat, ...], Cone], ...]

    @property
    def basis_images(self) -> tuple[tuple[int, ...], ...]:
        """e_0, …, e_d written in the basis e_1..e_d."""
        d = self.fan.rank
        return tuple(e_vector(d, [i]) for i in range(d + 1))


def bergman_fan(arr: Arrangement) -> BergmanFan:
    """The fan of cones spanned by e_V along chains of flats."""
    fl = flats(arr)
    d = arr.d
    ch = chains(fl)
    cones = [(c, _chain_cone(d, c)) for c in ch]
    maximal = [cone for c, cone in cones
               if not any(len(c2) > len(c) and set(c) < set(c2) for c2, _ in cones)]
    fan = fan_validate(maximal, d)
    if not fan.is_simplicial():  # pragma: no cover - guaranteed by theory
        raise ArrangementError("chain fan is not simplicial")
    return BergmanFan(fan, tuple(fl), tuple(cones))


def _label(phi: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(phi))


def _chart_sublattice(d: int, phi: Sequence[int]) -> Sublattice:
    return Sublattice.spanned_by(d, [e_vector(d, [j]) for j in range(d + 1) if j not in phi])


def spanning_bases(arr: Arrangement) -> list[tuple[int, ...]]:
    return [c for c in combinations(range(len(arr.forms)), arr.n + 1) if arr.rank_of(c) == arr.n + 1]


def structure_from_arrangement(arr: Arrangement, check: bool = True) -> MockStructure:
    """Mock toric structure on the chain fan with charts indexed by bases."""
    bf = bergman_fan(arr)
    d = arr.d
    phis = spanning_bases(arr)
    subs, fans = {}, {}
    for phi in phis:
        ps = set(phi)
        members = [cone for c, cone in bf.chain_cones
                   if all(len(ps & set(f.members)) == f.dim for f in c)]
        lab = _label(phi)
        subs[lab] = _chart_sublattice(d, phi)
        fans[lab] = Fan(d, members)
    ms = MockStructure(d, bf.fan, tuple(_label(p) for p in phis), subs, fans, "arrangement")
    if check:
        rep = verify_conditions(ms)
        if not rep.all_pass:  # pragma: no cover - contradicts the construction
            raise MockStructureError("internal error: arrangement structure fails verification",
                                     witness=rep.conditions)
    return ms


def general_position_violation(arr: Arrangement) -> tuple[int, ...] | None:
    for c in combinations(range(len(arr.forms)), arr.n + 1):
        if arr.rank_of(c) != arr.n + 1:
            return c
    return None


def skeleton_structure(arr: Arrangement) -> MockStructure:
    """Structure on the cones of dimension <= n of the fan of ℙ^d."""
    bad = general_position_violation(arr)
    if bad is not None:
        raise ArrangementError(f"forms {list(bad)} are not a basis (general position fails)")
    d, n = arr.d, arr.n
    idx = range(d + 1)
    cones = {}
    for k in range(0, n + 1):
        for sub in combinations(idx, k):
            cones[sub] = Cone._from_extreme_rays(d, [e_vector(d, [i]) for i in sub])
    fan = Fan(d, cones.values())
    subs, fans = {}, {}
    labels = []
    for phi in combinations(idx, n + 1):
        lab = _label(phi)
        labels.append(lab)
        subs[lab] = _chart_sublattice(d, phi)
        fans[lab] = Fan(d, [c for sub, c in cones.items() if set(sub) <= set(phi)])
    return MockStructure(d, fan, tuple(labels), subs, fans, "arrangement")


def del_pezzo_demo(lines: Sequence[Sequence]) -> MockStructure:
    """Blow up ℙ² at the points where consecutive line pairs (2i, 2i+1) meet.

    Parameters
    ----------
    lines : sequence of 2m linear forms on k³
    """
    arr = Arrangement.of(2, lines)
    _require_spanning(arr)
    if len(lines) % 2 or len(lines) < 3:
        raise ArrangementError("need an even number (at least 4) of lines")
    for a, b in combinations(range(len(lines)), 2):
        if arr.rank_of([a, b]) < 2:
            raise ArrangementError(f"lines {a} and {b} coincide")
    bad = general_position_violation(arr)
    if bad is not None:
        raise ArrangementError(f"lines {list(bad)} meet in a common point")
    base = skeleton_structure(arr)
    d = arr.d
    fan = base.fan
    for i in range(len(lines) // 2):
        a, b = e_vector(d, [2 * i]), e_vector(d, [2 * i + 1])
        fan = stellar_subdivide(fan, tuple(x + y for x, y in zip(a, b)))
    ident = LatticeMap.identity(d)
    return induce_pullback(base, ident, ident, fan)


def random_arrangement(rng, n_max: int = 2, d_max: int = 5, coeff: int = 2) -> Arrangement:
    """A random spanning arrangement (repeated and parallel forms allowed)."""
    while True:
        n = rng.randint(1, n_max)
        d = rng.randint(n, d_max)
        forms = []
        while len(forms) < d + 1:
            f = [rng.randint(-coeff, coeff) for _ in range(n + 1)]
            if any(f):
                forms.append(f)
        arr = Arrangement.of(n, forms)
        if arr.spans():
            return arr
