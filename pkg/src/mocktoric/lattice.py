"""Exact integer linear algebra on lattices Z^n.

Everything here works on plain Python integers (arbitrary precision) and
``fractions.Fraction``; matrices are lists of rows.  The public surface is
small: Smith normal form, saturation, quotient maps, sections and
complements.  The remaining helpers (Hermite form, kernels, rational solves)
are used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]


class LatticeError(ValueError):
    """Malformed lattice data or a violated precondition."""


class NoSectionError(LatticeError):
    """Raised when a section with the requested property cannot exist."""


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[list]:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def primitive(v: Sequence) -> Vector:
    """Scale a rational (or integer) vector to the primitive integer vector
    on the same ray.  The zero vector is returned unchanged."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q, via fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c]
                m[i] = [p * x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def solve_rational(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution x of a·x = b over Q, or None when inconsistent."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    aug = [list(a[i]) + [b[i]] for i in range(nrows)]
    red, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(red, piv):
        x[c] = row[-1]
    return tuple(x)


def inverse_rational(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(m[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise LatticeError("matrix is singular")
    return [row[n:] for row in red]


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse_rational(m)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise LatticeError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms
# ---------------------------------------------------------------------------


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None
                      ) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U·m·V = D``.

    Pivots are chosen as the nonzero entry of smallest absolute value in the
    active block (ties: lowest row, then lowest column), so U and V are
    reproducible.  ``ncols`` is only needed for matrices with zero rows.

    Returns
    -------
    U, D, V : list of lists
        U (r×r) and V (c×c) are unimodular; D is diagonal with nonnegative
        entries d_1 | d_2 | ... .
    """
    r = len(m)
    c = len(m[0]) if r else (ncols or 0)
    a = [list(map(int, row)) for row in m]
    U = identity(r)
    V = identity(c)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return U, a, V
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return U, a, V


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    if not m:
        return []
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def hermite_rows(rows: Iterable[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Row Hermite normal form of the lattice generated by ``rows``.

    Nonzero rows only, in echelon order, pivots positive and the entries
    above each pivot reduced into ``[0, pivot)``.  Equal lattices give equal
    output, which is what makes it a canonical basis.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    n = len(a[0]) if ncols is None else ncols
    out: list[list[int]] = []
    row = 0
    for col in range(n):
        nz = [i for i in range(row, len(a)) if a[i][col]]
        if not nz:
            continue
        # gcd-combine the column into a single pivot row
        piv = nz[0]
        for i in nz[1:]:
            x, y = a[piv][col], a[i][col]
            g, s, t = xgcd(x, y)
            p_new = [s * u + t * v for u, v in zip(a[piv], a[i])]
            i_new = [(x // g) * v - (y // g) * u for u, v in zip(a[piv], a[i])]
            a[piv], a[i] = p_new, i_new
        a[row], a[piv] = a[piv], a[row]
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
        p = a[row][col]
        for i in range(row):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[row])]
        row += 1
        a = a[:row] + [r for r in a[row:] if any(r)]
        if row == len(a):
            break
    out = [tuple(r) for r in a[:row]]
    return out


def kernel_basis(m: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Hermite basis of the integer kernel {x in Z^ncols : m·x = 0}."""
    if not m or all(not any(r) for r in m):
        return [tuple(r) for r in identity(ncols)]
    _, d, V = smith_normal_form(m)
    rk = sum(1 for i in range(min(len(d), ncols)) if d[i][i])
    cols = [tuple(V[i][j] for i in range(ncols)) for j in range(rk, ncols)]
    return hermite_rows(cols, ncols)


def lattice_basis(rows: Iterable[Sequence[int]], ncols: int) -> list[Vector]:
    """Canonical basis of the lattice generated by ``rows``."""
    return hermite_rows([r for r in rows], ncols)


def saturate_rows(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Hermite basis of span_Q(rows) ∩ Z^ncols."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    perp = kernel_basis(rows, ncols)
    if not perp:
        return [tuple(r) for r in identity(ncols)]
    return kernel_basis(perp, ncols)


def coordinates(basis: Sequence[Sequence[int]], v: Sequence) -> tuple[Fraction, ...] | None:
    """Rational coordinates of v in terms of the rows of ``basis``."""
    if not basis:
        return () if not any(v) else None
    return solve_rational(transpose(basis), list(v))


# ---------------------------------------------------------------------------
# typed wrappers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix of a homomorphism Z^source_rank -> Z^target_rank.

    ``matrix`` has ``target_rank`` rows and ``source_rank`` columns and acts
    on column vectors.  The dual map is the transpose.
    """

    matrix: tuple[Vector, ...]
    source_rank: int
    target_rank: int

    def __post_init__(self):
        if len(self.matrix) != self.target_rank:
            raise LatticeError("matrix row count does not match target rank")
        if any(len(r) != self.source_rank for r in self.matrix):
            raise LatticeError("matrix column count does not match source rank")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], source_rank: int | None = None) -> "LatticeMap":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        src = len(rows[0]) if rows else (source_rank or 0)
        return cls(rows, src, len(rows))

    @classmethod
    def identity(cls, n: int) -> "LatticeMap":
        return cls.from_rows(identity(n), n)

    @classmethod
    def zero(cls, source_rank: int, target_rank: int) -> "LatticeMap":
        return cls(tuple((0,) * source_rank for _ in range(target_rank)), source_rank, target_rank)

    def __call__(self, v: Sequence) -> tuple:
        if len(v) != self.source_rank:
            raise LatticeError(f"vector of length {len(v)} applied to map from Z^{self.source_rank}")
        return matvec(self.matrix, v)

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """``self ∘ other``."""
        if other.target_rank != self.source_rank:
            raise LatticeError("maps are not composable")
        rows = [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(self.source_rank))
                 for j in range(other.source_rank)] for i in range(self.target_rank)]
        return LatticeMap(tuple(tuple(r) for r in rows), other.source_rank, self.target_rank)

    def dual(self) -> "LatticeMap":
        return LatticeMap(tuple(tuple(r) for r in transpose(self.matrix, self.source_rank)),
                          self.target_rank, self.source_rank)

    def is_surjective(self) -> bool:
        if self.target_rank == 0:
            return True
        f = invariant_factors([list(r) for r in self.matrix])
        return len(f) == self.target_rank and all(x == 1 for x in f)

    def right_inverse(self) -> "LatticeMap":
        """An integer map s with self∘s = id (requires surjectivity)."""
        if not self.is_surjective():
            raise LatticeError("map is not surjective")
        t = self.target_rank
        if t == 0:
            return LatticeMap.zero(0, self.source_rank)
        U, _, V = smith_normal_form([list(r) for r in self.matrix])
        vt = [row[:t] for row in V]
        rows = matmul(vt, U)
        return LatticeMap.from_rows(rows, t)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^ambient_rank given by independent basis vectors."""

    ambient_rank: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        if any(len(b) != self.ambient_rank for b in self.basis):
            raise LatticeError("basis vector length differs from ambient rank")
        if rank(self.basis) != len(self.basis):
            raise LatticeError("basis vectors are not linearly independent")

    @classmethod
    def spanned_by(cls, ambient_rank: int, generators: Iterable[Sequence[int]]) -> "Sublattice":
        """Sublattice generated by arbitrary (possibly dependent) vectors."""
        return cls(ambient_rank, tuple(lattice_basis(list(generators), ambient_rank)))

    @classmethod
    def zero(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, ())

    @classmethod
    def full(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, tuple(tuple(r) for r in identity(ambient_rank)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def canonical(self) -> "Sublattice":
        return Sublattice(self.ambient_rank, tuple(lattice_basis(self.basis, self.ambient_rank)))

    def contains(self, v: Sequence[int]) -> bool:
        c = coordinates(self.basis, v)
        return c is not None and all(x.denominator == 1 for x in c)

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return (self.ambient_rank == other.ambient_rank
                and lattice_basis(self.basis, self.ambient_rank)
                == lattice_basis(other.basis, other.ambient_rank))

    def __hash__(self):
        return hash((self.ambient_rank, tuple(lattice_basis(self.basis, self.ambient_rank))))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def is_saturated(sub: Sublattice) -> bool:
    """True iff Z^n / sub is torsion-free."""
    if sub.rank == 0:
        return True
    return all(d == 1 for d in invariant_factors([list(b) for b in sub.basis]))


def saturation(sub: Sublattice) -> Sublattice:
    """span_R(sub) ∩ Z^n, as a Hermite basis."""
    return Sublattice(sub.ambient_rank, tuple(saturate_rows(sub.basis, sub.ambient_rank)))


def sum_is_saturated(ambient_rank: int, *generator_sets: Iterable[Sequence[int]]) -> bool:
    """Is Z^n modulo the lattice generated by all given vectors torsion-free?"""
    gens = [list(g) for s in generator_sets for g in s if any(g)]
    if not gens:
        return True
    return all(d == 1 for d in invariant_factors(gens))


def quotient_map(sub: Sublattice) -> LatticeMap:
    """The projection Z^n -> Z^(n - rank) with kernel exactly ``sub``.

    The rows of the matrix are the Hermite basis of the annihilator of
    ``sub`` in the dual lattice, so the map is canonical and its rows double
    as a basis of the dual of the quotient.
    """
    if not is_saturated(sub):
        raise LatticeError("sublattice is not saturated; call saturation() first")
    n = sub.ambient_rank
    if sub.rank == 0:
        return LatticeMap.identity(n)
    rows = kernel_basis(sub.basis, n)
    return LatticeMap(tuple(rows), n, len(rows))


def section_containing(pi: LatticeMap, l0: Sublattice) -> LatticeMap:
    """A section s of ``pi`` (pi∘s = id) whose image contains ``l0``."""
    if not pi.is_surjective():
        raise NoSectionError("pi is not surjective")
    if l0.ambient_rank != pi.source_rank:
        raise NoSectionError("L0 does not live in the source of pi")
    t = pi.target_rank
    images = [pi(b) for b in l0.basis]
    if rank(images) != l0.rank:
        raise NoSectionError("L0 meets the kernel of pi nontrivially")
    if images and not all(d == 1 for d in invariant_factors(images)):
        raise NoSectionError("target modulo pi(L0) has torsion")
    if t == 0:
        return LatticeMap.zero(0, pi.source_rank)
    rinv = pi.right_inverse()
    # complete pi(L0) to a basis of Z^t
    if images:
        _, _, V = smith_normal_form(images)
        vinv = inverse_unimodular(V)
        complement = [tuple(r) for r in vinv[len(images):]]
    else:
        complement = [tuple(r) for r in identity(t)]
    target_basis = [tuple(x) for x in images] + complement
    source_images = [tuple(b) for b in l0.basis] + [rinv(c) for c in complement]
    # s · [target_basis as columns] = [source_images as columns]
    tb_inv = inverse_unimodular(transpose(target_basis))
    s_rows = matmul(transpose(source_images), tb_inv)
    s = LatticeMap.from_rows(s_rows, t)
    assert pi.compose(s) == LatticeMap.identity(t)
    return s


def complement_splitting(lp: Sublattice) -> Sublattice:
    """N'' ⊆ Z^n with lp ⊕ (N'' × {0}) = Z^n ⊕ Z.

    ``lp`` lives in Z^(n+1) (last coordinate is the extra Z), must be
    saturated and contain an element of last coordinate 1.
    """
    m = lp.ambient_rank
    n = m - 1
    if n < 0:
        raise LatticeError("ambient rank must be at least 1")
    if not is_saturated(lp):
        raise LatticeError("quotient by Lp has torsion")
    heights = [b[-1] for b in lp.basis]
    g = 0
    for h in heights:
        g = gcd(g, h)
    if g != 1:
        raise LatticeError("Lp contains no element of height 1")
    # combine basis vectors into one of height exactly 1
    coeffs = [0] * lp.rank
    acc = 0
    for i, h in enumerate(heights):
        if acc == 0 and h != 0:
            coeffs = [0] * lp.rank
            coeffs[i] = 1
            acc = h
            continue
        if h == 0:
            continue
        g2, x, y = xgcd(acc, h)
        coeffs = [c * x for c in coeffs]
        coeffs[i] += y
        acc = g2
    if acc < 0:
        coeffs = [-c for c in coeffs]
    height_one = tuple(sum(c * b[k] for c, b in zip(coeffs, lp.basis)) for k in range(m))
    assert height_one[-1] == 1
    _, _, V = smith_normal_form([list(b) for b in lp.basis])
    vinv = inverse_unimodular(V)
    complement = []
    for row in vinv[lp.rank:]:
        h = row[-1]
        complement.append(tuple(x - h * y for x, y in zip(row, height_one))[:n])
    result = Sublattice(n, tuple(lattice_basis(complement, n))) if complement else Sublattice.zero(n)
    stacked = [list(b) for b in lp.basis] + [list(c) + [0] for c in result.basis]
    if len(stacked) != m or abs(determinant(stacked)) != 1:
        raise LatticeError("internal: complement does not split")
    return result


def image_sublattice(f: LatticeMap, sub: Sublattice) -> Sublattice:
    """f(sub) as a sublattice of the target (generators may become dependent)."""
    return Sublattice.spanned_by(f.target_rank, [f(b) for b in sub.basis])
