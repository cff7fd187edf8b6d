import random

import pytest

from mocktoric.cone import cone_from_rays, multiplicity, zero_cone
from mocktoric.fan import (
    Fan,
    FanError,
    _parallelepiped_point,
    fan_from_maximal,
    fan_validate,
    half_line,
    is_refinement,
    make_unimodular,
    minimal_containing_cone,
    product_fan,
    projective_plane,
    quadrant,
    shape_predicates,
    simplicialize,
    slice_and_project,
    star_quotient,
    star_subfan,
    stellar_subdivide,
)
from generators import random_fan, random_fan_over_half_line, random_stellar
from oracles import multiplicity_by_minors, nested, pairwise_meets_sampled, support_agrees

P2 = projective_plane()
E1, E2, E0 = (1, 0), (0, 1), (-1, -1)


def ray(*v):
    return cone_from_rays([v])


def maximal_ray_sets(f):
    return {c.ray_set for c in f.maximal_cones}


def test_p2_fan_has_seven_cones():
    assert len(P2.cones) == 7
    assert set(P2.rays) == {E1, E2, E0}


def test_incompatible_cones_rejected():
    with pytest.raises(FanError) as err:
        fan_validate([cone_from_rays([(1, 0), (1, 1)]), cone_from_rays([(1, 0), (0, 1)])])
    assert err.value.witness is not None


def test_zero_fan_is_valid():
    f = fan_validate([zero_cone(2)])
    assert f.cones == (zero_cone(2),)


def test_minimal_containing_cone():
    assert minimal_containing_cone(P2, (2, 1)) == cone_from_rays([E1, E2])
    assert minimal_containing_cone(P2, (0, 0)) == zero_cone(2)
    assert minimal_containing_cone(P2, (1, 0)) == ray(*E1)
    assert minimal_containing_cone(quadrant(), (-1, 0)) is None


def test_is_refinement_examples():
    assert is_refinement(P2, P2)
    split = stellar_subdivide(quadrant(), (1, 1))
    assert is_refinement(split, quadrant())
    half_plane = fan_from_maximal(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [1, 2]])
    assert not is_refinement(quadrant(), half_plane)


def test_product_fan_examples():
    assert product_fan(half_line(), half_line()) == quadrant()
    trivial = Fan(0, [zero_cone(0)])
    assert product_fan(P2, trivial) == P2
    p1 = fan_from_maximal(1, [(1,), (-1,)], [[0], [1]])
    assert len(product_fan(p1, half_line()).cones) == 6


def test_star_subfan_examples():
    st = star_subfan(P2, ray(*E1))
    assert len(st.cones) == 6
    assert cone_from_rays([E2, E0]) not in st
    assert star_subfan(P2, zero_cone(2)) == P2
    top = cone_from_rays([E1, E2])
    assert set(star_subfan(P2, top).cones) == {zero_cone(2), ray(*E1), ray(*E2), top}


def test_star_quotient_examples():
    fan, q = star_quotient(P2, ray(*E1))
    assert fan == fan_from_maximal(1, [(1,), (-1,)], [[0], [1]])
    assert q(E1) == (0,)
    same, ident = star_quotient(P2, zero_cone(2))
    assert same == P2 and ident.matrix == ((1, 0), (0, 1))
    small, _ = star_quotient(quadrant(), ray(1, 0))
    assert small == half_line()


def test_slice_and_project_examples():
    res = slice_and_project(quadrant())
    assert set(res.height_zero.cones) == {zero_cone(2), ray(1, 0)}
    assert res.projected == half_line()
    res2 = slice_and_project(Fan.from_cones(2, [cone_from_rays([(0, 1), (1, 1)])]))
    assert res2.height_zero.cones == (zero_cone(2),)
    assert res2.projected.cones == (zero_cone(1),)
    with pytest.raises(FanError):
        slice_and_project(Fan.from_cones(2, [cone_from_rays([(1, -1)])]))


def test_stellar_examples():
    q = stellar_subdivide(quadrant(), (1, 1))
    assert maximal_ray_sets(q) == {frozenset({(1, 0), (1, 1)}), frozenset({(1, 1), (0, 1)})}
    assert stellar_subdivide(P2, E1) == P2
    assert len(stellar_subdivide(P2, (1, 1)).maximal_cones) == 4


def test_make_unimodular_examples():
    assert make_unimodular(P2) == P2
    f = make_unimodular(Fan.from_cones(2, [cone_from_rays([(1, 0), (1, 2)])]))
    assert maximal_ray_sets(f) == {frozenset({(1, 0), (1, 1)}), frozenset({(1, 1), (1, 2)})}
    sq = Fan.from_cones(3, [cone_from_rays([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])])
    u = make_unimodular(sq)
    assert len(u.maximal_cones) == 2 and u.is_unimodular()


def test_shape_predicate_examples():
    f = Fan.from_cones(2, [cone_from_rays([(1, 0), (1, 1)])])
    rep = shape_predicates(f)
    assert [f.cones[i] for i in rep.bdd_cones] == [ray(1, 1)]
    assert rep.specifically_reduced
    g = Fan.from_cones(2, [cone_from_rays([(1, 2)])])
    rep2 = shape_predicates(g)
    assert not rep2.specifically_reduced and rep2.specifically_reduced_witness == ray(1, 2)
    u = product_fan(P2, half_line())
    rep3 = shape_predicates(u)
    assert rep3.generically_unimodular and rep3.compactly_arranged


def test_shape_predicates_reject_lower_half_space():
    with pytest.raises(FanError):
        shape_predicates(Fan.from_cones(2, [cone_from_rays([(1, -1)])]))


def test_compactly_arranged_failure_has_witness():
    f = Fan.from_cones(2, [cone_from_rays([(1, 1), (-1, 1)])])
    rep = shape_predicates(f)
    assert rep.compactly_arranged
    g = Fan.from_cones(3, [cone_from_rays([(0, 0, 1), (1, 0, 1), (0, 1, 0)])])
    rep_g = shape_predicates(g)
    assert rep_g.compactly_arranged
    # (1,0,1) and (-1,0,1) are opposite corners of a square cone with a height-0 ray
    h = Fan.from_cones(3, [cone_from_rays([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 0)])])
    rep_h = shape_predicates(h)
    assert not rep_h.compactly_arranged
    a, b, tau = rep_h.compactly_arranged_witness
    assert {a, b} == {ray(1, 0, 1), ray(-1, 0, 1)}
    assert tau == h.maximal_cones[0]


# properties --------------------------------------------------------------


@pytest.mark.parametrize("seed", range(12))
def test_star_quotient_is_a_bijective_fan(seed):
    rng = random.Random(seed)
    f = random_fan(rng, rng.randint(2, 3), h=3)
    for s in f.cones:
        fan, q = star_quotient(f, s)
        star = [t for t in f.cones if s.ray_set <= t.ray_set]
        from mocktoric.cone import image
        imgs = {t: image(t, q) for t in star}
        assert len(set(imgs.values())) == len(star)
        assert set(imgs.values()) == set(fan.cones)
        for a in star:
            for b in star:
                assert (a.ray_set <= b.ray_set) == imgs[b].contains_cone(imgs[a])


@pytest.mark.parametrize("seed", range(12))
def test_stellar_and_unimodular_preserve_support(seed):
    rng = random.Random(100 + seed)
    f = random_fan(rng, rng.randint(2, 3), h=3)
    g = random_stellar(rng, f, steps=2)
    for out in (g, make_unimodular(f)):
        assert fan_validate(out.maximal_cones, out.rank) == out
        assert is_refinement(out, f)
        assert support_agrees(out, f, 2)[0]
        assert nested(out, f)[0]
        assert pairwise_meets_sampled(out, 1 if out.rank == 3 else 2)[0]


@pytest.mark.parametrize("seed", range(10))
def test_unimodularization_multiplicity_decreases(seed):
    rng = random.Random(200 + seed)
    f = simplicialize(random_fan(rng, rng.randint(2, 3), h=4))
    start = f
    peak = max(multiplicity(c).index for c in f.cones)
    while True:
        bad = next((c for c in f.cones if not multiplicity(c).is_unimodular), None)
        if bad is None:
            break
        v = _parallelepiped_point(bad)
        g = stellar_subdivide(f, v)
        new_peak = max(multiplicity(c).index for c in g.cones)
        assert new_peak <= peak
        for c in g.cones:
            if v in c.ray_set and bad.contains_cone(c):
                assert multiplicity(c).index < multiplicity(bad).index
        f, peak = g, new_peak
    assert f == make_unimodular(start)
    assert all(multiplicity_by_minors(c.rays) == 1 for c in f.maximal_cones)


@pytest.mark.parametrize("seed", range(15))
def test_predicate_implications_over_half_line(seed):
    rng = random.Random(300 + seed)
    f = random_fan_over_half_line(rng)
    for g in (f, simplicialize(f), make_unimodular(f)):
        rep = shape_predicates(g)
        if g.is_simplicial():
            assert rep.compactly_arranged
        if g.is_unimodular():
            assert rep.generically_unimodular


@pytest.mark.parametrize("seed", range(8))
def test_slice_projection_is_injective(seed):
    rng = random.Random(400 + seed)
    f = random_fan_over_half_line(rng)
    res = slice_and_project(f)
    images = [p for _, p in res.correspondence]
    assert len(set(images)) == len(images)
    assert set(images) == set(res.projected.cones)
    for c, p in res.correspondence:
        assert all(r[-1] == 0 for r in c.rays)
        assert [r[:-1] for r in c.rays] == list(p.rays)
