import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mocktoric.cone import cone_from_rays, faces, zero_cone
from mocktoric.fan import is_refinement, projective_plane, quadrant, star_quotient
from mocktoric.lattice import LatticeMap
from mocktoric.laurent import (
    LaurentPoly,
    ValuationError,
    check_certificate,
    fineness_certificate,
    generic_fiber_poly,
    is_fine_fan,
    linearity_regions,
    pullback,
    refine_along,
    restrict_to_orbit,
    val_cone,
    val_eval,
)
from generators import random_fan, random_point_in, random_poly
from oracles import regions_from_val_cone, val_bruteforce, val_cone_by_inequalities

X, Y = LaurentPoly.monomial((1, 0)), LaurentPoly.monomial((0, 1))
ONE2 = LaurentPoly.constant(2)
Q = cone_from_rays([(1, 0), (0, 1)])


def test_val_eval_examples():
    assert val_eval(X + Y, (2, 3)) == 2
    assert val_eval(LaurentPoly.monomial((3, -2)), (1, 1)) == 1
    assert val_eval(ONE2 + X, (1, 0)) == 0


def test_val_eval_of_zero_raises():
    with pytest.raises(ValuationError):
        val_eval(LaurentPoly(2, {}), (1, 0))


def test_terms_merge_and_cancel():
    f = X + X
    assert f.terms == {(1, 0): 2}
    assert (X - X).is_zero()
    t = LaurentPoly.monomial((0, 1))
    xs = LaurentPoly.monomial((1, 0))
    assert (xs + t * xs).terms == {(1, 0): 1, (1, 1): 1}


def test_val_cone_examples():
    c = val_cone(X + Y, Q)
    assert set(c.facets) == {(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)}
    m = val_cone(LaurentPoly.monomial((2, 1)), Q)
    assert m == val_cone_by_inequalities(LaurentPoly.monomial((2, 1)), Q)
    r = val_cone(ONE2 + X, zero_cone(2))
    assert r == cone_from_rays([(0, 0, 1)])


def test_linearity_region_examples():
    regs = linearity_regions(X + Y, Q)
    tops = {(r.cone, r.witness_exponent) for r in regs if r.cone.dim == 2}
    # on cone{(1,0),(1,1)} the y-term is smaller: val((1,0)) = min(1, 0) = 0
    assert tops == {(cone_from_rays([(1, 0), (1, 1)]), (0, 1)), (cone_from_rays([(1, 1), (0, 1)]), (1, 0))}
    mono = linearity_regions(LaurentPoly.monomial((1, 2)), Q)
    assert {r.cone for r in mono if r.cone.dim == 2} == {Q}
    flat = linearity_regions(ONE2 + X + Y, Q)
    assert [(r.cone, r.witness_exponent) for r in flat if r.cone.dim == 2] == [(Q, (0, 0))]


def test_refine_along_examples():
    assert len(refine_along(quadrant(), X + Y).maximal_cones) == 2
    assert refine_along(projective_plane(), LaurentPoly.monomial((3, 1))) == projective_plane()
    assert refine_along(projective_plane(), ONE2 + X + Y) == projective_plane()


def test_fineness_certificate_examples():
    assert fineness_certificate(X + Y, cone_from_rays([(1, 1)])) == (-1, 0)
    assert fineness_certificate(X + Y, Q) is None
    assert fineness_certificate(LaurentPoly.monomial((2, -1)), Q) == (-2, 1)


def test_is_fine_fan_examples():
    assert not is_fine_fan(quadrant(), X + Y).fine
    assert is_fine_fan(refine_along(quadrant(), X + Y), X + Y).fine
    assert is_fine_fan(projective_plane(), LaurentPoly.monomial((1, 1))).fine


def test_restrict_to_orbit_examples():
    h, basis = restrict_to_orbit(ONE2 + X + Y, cone_from_rays([(1, 0)]), (0, 0))
    assert basis == ((0, 1),) and h == LaurentPoly(1, {(0,): 1, (1,): 1})
    h2, basis2 = restrict_to_orbit(X, cone_from_rays([(0, 1)]), (0, 0))
    assert basis2 == ((1, 0),) and h2 == LaurentPoly.monomial((1,))
    h3, basis3 = restrict_to_orbit(ONE2 + X, zero_cone(2), (0, 0))
    assert basis3 == ((1, 0), (0, 1)) and h3 == ONE2 + X


def test_restrict_to_orbit_rejects_bad_certificate():
    with pytest.raises(ValuationError):
        restrict_to_orbit(X + Y, Q, (0, 0))


def test_pullback_examples():
    x1 = LaurentPoly.monomial((1,))
    assert pullback(x1, LatticeMap.from_rows([[1, 0]], 2)) == LaurentPoly.monomial((1, 0))
    sumab = LatticeMap.from_rows([[1, 1]], 2)
    assert pullback(LaurentPoly.constant(1) + x1, sumab).terms == {(0, 0): 1, (1, 1): 1}
    f = ONE2 + X + Y
    assert pullback(f, LatticeMap.identity(2)) == f


def test_generic_fiber_examples():
    xy_t = LaurentPoly(3, {(1, 0, 0): 1, (0, 1, 1): 1})
    g = generic_fiber_poly(xy_t)
    assert g.support == ((0, 1), (1, 0))
    assert g.coefficient((0, 1)) == {1: 1}
    t2 = generic_fiber_poly(LaurentPoly.monomial((0, 0, 2)))
    assert t2.terms == (((0, 0), ((2, Fraction(1)),)),)
    merged = generic_fiber_poly(LaurentPoly(2, {(1, 0): 1, (1, 1): 1}))
    assert merged.coefficient((1,)) == {0: 1, 1: 1}


# properties ------------------------------------------------------------


polys = st.integers(1, 3).flatmap(
    lambda n: st.dictionaries(st.tuples(*[st.integers(-4, 4)] * n), st.integers(-3, 3).filter(bool),
                              min_size=1, max_size=6).map(lambda d: LaurentPoly(n, d)))


@settings(max_examples=80, deadline=None)
@given(polys, st.randoms(use_true_random=False))
def test_val_is_additive(f, rnd):
    g = random_poly(rnd, f.rank)
    for _ in range(20):
        v = tuple(rnd.randint(-6, 6) for _ in range(f.rank))
        assert val_eval(f * g, v) == val_eval(f, v) + val_eval(g, v)
        assert val_eval(f, v) == val_bruteforce(f, v)


@pytest.mark.parametrize("seed", range(15))
def test_regions_match_val_cone_faces(seed):
    rng = random.Random(seed)
    fan = random_fan(rng, rng.randint(1, 3), h=3)
    f = random_poly(rng, fan.rank)
    for s in fan.maximal_cones:
        assert {r.cone for r in linearity_regions(f, s)} == regions_from_val_cone(f, s)
        assert val_cone(f, s) == val_cone_by_inequalities(f, s)


@pytest.mark.parametrize("seed", range(15))
def test_val_is_minus_lowest_height_in_val_cone(seed):
    rng = random.Random(50 + seed)
    fan = random_fan(rng, rng.randint(1, 3), h=3)
    f = random_poly(rng, fan.rank)
    for s in fan.maximal_cones:
        c = val_cone(f, s)
        for _ in range(5):
            v = random_point_in(rng, s)
            a = -val_eval(f, v)
            assert c.contains(tuple(v) + (a,))
            assert not c.contains(tuple(v) + (a - 1,))
            # a is the minimum: (v, a - 1/2) already leaves the cone
            assert not c.contains(tuple(2 * x for x in v) + (2 * a - 1,))


@pytest.mark.parametrize("seed", range(15))
def test_refinement_is_fine_with_equal_support(seed):
    rng = random.Random(100 + seed)
    fan = random_fan(rng, rng.randint(1, 3), h=3)
    f = random_poly(rng, fan.rank)
    r = refine_along(fan, f)
    assert is_refinement(r, fan)
    rep = is_fine_fan(r, f)
    assert rep.fine
    for c, cert in rep.certificates:
        assert check_certificate(f, c, cert)
        for ray in c.rays:
            assert val_eval(f, ray) == -sum(a * b for a, b in zip(ray, cert))


@pytest.mark.parametrize("seed", range(20))
def test_factor_fineness(seed):
    rng = random.Random(200 + seed)
    n = rng.randint(1, 3)
    factors = [random_poly(rng, n, rng.randint(1, 3), h=2) for _ in range(rng.randint(2, 3))]
    f = factors[0]
    for g in factors[1:]:
        f = f * g
    fan = random_fan(rng, n, h=3)
    cones = list(fan.cones) + list(refine_along(fan, f).cones)
    for s in cones:
        whole = fineness_certificate(f, s) is not None
        parts = all(fineness_certificate(g, s) is not None for g in factors)
        assert whole == parts


@pytest.mark.parametrize("seed", range(10))
def test_pullback_transports_val_and_certificates(seed):
    rng = random.Random(300 + seed)
    n = rng.randint(1, 2)
    extra = rng.randint(0, 2)
    rows = [[int(i == j) for j in range(n)] + [rng.randint(-2, 2) for _ in range(extra)] for i in range(n)]
    a = LatticeMap.from_rows(rows, n + extra)
    f = random_poly(rng, n)
    g = pullback(f, a)
    for _ in range(30):
        w = tuple(rng.randint(-5, 5) for _ in range(n + extra))
        assert val_eval(g, w) == val_eval(f, a(w))
    # x -> (x, 0) is a section, so it lifts cones of N to cones of N' over them
    fan = refine_along(random_fan(rng, n, h=3), f)
    for c in fan.cones:
        cert = fineness_certificate(f, c)
        lifted = cone_from_rays([tuple(r) + (0,) * extra for r in c.rays], n + extra)
        assert check_certificate(g, lifted, a.dual()(cert))


@pytest.mark.parametrize("seed", range(10))
def test_generic_fiber_val_matches_height_zero(seed):
    rng = random.Random(400 + seed)
    n = rng.randint(1, 2)
    f = random_poly(rng, n + 1)
    g = generic_fiber_poly(f)
    for _ in range(20):
        v = tuple(rng.randint(-5, 5) for _ in range(n))
        assert g.val_eval(v) == val_eval(f, v + (0,))


@pytest.mark.parametrize("seed", range(12))
def test_orbit_restriction_stays_fine(seed):
    rng = random.Random(500 + seed)
    n = rng.randint(2, 3)
    f = random_poly(rng, n)
    fan = refine_along(random_fan(rng, n, h=3), f)
    for s in fan.cones:
        if s.dim == 0:
            continue
        cert = fineness_certificate(f, s)
        h, _ = restrict_to_orbit(f, s, cert)
        quot, _ = star_quotient(fan, s)
        if h.rank:
            assert is_fine_fan(quot, h).fine


def test_faces_of_val_cone_project_injectively():
    c = val_cone(X + Y + ONE2, Q)
    up = (0, 0, 1)
    for face in faces(c):
        if up in face.ray_set:
            continue
        assert len({r[:-1] for r in face.rays}) == len(face.rays)
