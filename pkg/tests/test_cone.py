import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mocktoric.cone import (
    ConeError,
    cone_from_inequalities,
    cone_from_rays,
    dual,
    faces,
    image,
    intersect,
    multiplicity,
    parallelepiped_points,
    zero_cone,
)
from mocktoric.lattice import LatticeMap, dot
from oracles import box, in_cone, multiplicity_by_minors, qrank

QUADRANT = cone_from_rays([(1, 0), (0, 1)])


def test_quadrant_facets():
    assert set(QUADRANT.facets) == {(1, 0), (0, 1)}


def test_facets_of_skew_cone():
    c = cone_from_rays([(1, 0), (1, 2)])
    assert set(c.facets) == {(0, 1), (2, -1)}


def test_opposite_rays_give_lineality():
    c = cone_from_rays([(1, 0), (-1, 0)])
    assert c.lineality == ((1, 0),)
    assert not c.is_strongly_convex()


def test_nonextreme_generators_dropped():
    c = cone_from_rays([(1, 0), (0, 1), (1, 1), (2, 0)])
    assert c.rays == ((0, 1), (1, 0))


def test_dual_examples():
    assert dual(QUADRANT) == QUADRANT
    assert dual(cone_from_rays([(1, 0), (1, 2)])) == cone_from_rays([(0, 1), (2, -1)])
    full = dual(zero_cone(2))
    assert len(full.lineality) == 2 and full.dim == 2


def test_intersect_examples():
    s = cone_from_rays([(1, 0), (1, 2)])
    assert intersect(s, s) == s
    below = cone_from_inequalities([(1, -1)], (), 2)
    assert intersect(QUADRANT, below) == cone_from_rays([(1, 0), (1, 1)])
    assert intersect(QUADRANT, cone_from_rays([(-1, 0), (0, -1)])).is_zero()


def test_image_examples():
    pr1 = LatticeMap.from_rows([[1, 0]], 2)
    assert image(cone_from_rays([(1, 0), (1, 2)]), pr1) == cone_from_rays([(1,)])
    s = cone_from_rays([(1, 0), (1, 2)])
    assert image(s, LatticeMap.identity(2)) == s
    assert image(zero_cone(2), pr1).is_zero()


def test_faces_counts():
    assert len(faces(QUADRANT)) == 4
    assert len(faces(cone_from_rays([(1, 0)]))) == 2
    assert len(faces(cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))) == 8


def test_faces_rejects_lineality():
    with pytest.raises(ConeError):
        faces(cone_from_rays([(1, 0), (-1, 0)]))


def test_multiplicity_examples():
    assert multiplicity(QUADRANT) == (1, True)
    assert multiplicity(cone_from_rays([(1, 0), (1, 2)])).index == 2
    assert multiplicity(cone_from_rays([(1, 1, 0), (0, 1, 1), (1, 0, 1)])).index == 2


def test_multiplicity_rejects_nonsimplicial():
    sq = cone_from_rays([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])
    with pytest.raises(ConeError):
        multiplicity(sq)


def test_parallelepiped_points_of_skew_cone():
    pts = [pt for lam, pt in parallelepiped_points([(1, 0), (1, 2)], 2)]
    assert pts == [(0, 0), (1, 1)]


gen_lists = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(-3, 3)] * n), min_size=0, max_size=5)
    .map(lambda g: (n, g)))


def make(ng):
    n, g = ng
    return cone_from_rays(g, n)


@settings(max_examples=60, deadline=None)
@given(gen_lists)
def test_dual_involution(ng):
    c = make(ng)
    assert dual(dual(c)) == c


@settings(max_examples=60, deadline=None)
@given(gen_lists)
def test_v_and_h_descriptions_agree(ng):
    c = make(ng)
    for f in c.facets:
        assert all(dot(f, r) >= 0 for r in c.rays)
        assert all(dot(f, l) == 0 for l in c.lineality)
        tight = [r for r in c.rays if dot(f, r) == 0] + list(c.lineality)
        # the facet is tight on a set spanning a hyperplane of span(c)
        assert qrank(tight) == c.dim - 1 if tight else c.dim == 1
    for e in c.equations:
        assert all(dot(e, r) == 0 for r in c.rays)
    # membership by H-description agrees with Carathéodory on a small box
    for v in box(c.rank, 1 if c.rank > 2 else 2):
        assert c.contains(v) == in_cone(c.rays, v, c.lineality)


@settings(max_examples=40, deadline=None)
@given(gen_lists, gen_lists)
def test_intersection_is_largest_common_subcone(a, b):
    if a[0] != b[0]:
        return
    ca, cb = make(a), make(b)
    i = intersect(ca, cb)
    assert ca.contains_cone(i) and cb.contains_cone(i)
    for v in box(ca.rank, 1 if ca.rank > 2 else 2):
        assert i.contains(v) == (in_cone(ca.rays, v, ca.lineality) and in_cone(cb.rays, v, cb.lineality))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(-3, 3)] * n), min_size=1, max_size=n)))
def test_multiplicity_matches_minors(rays):
    c = cone_from_rays(rays)
    if not c.is_simplicial():
        return
    assert multiplicity(c).index == multiplicity_by_minors(c.rays)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3).flatmap(
    lambda n: st.tuples(st.lists(st.tuples(*[st.integers(-2, 2)] * n), min_size=1, max_size=n),
                        st.lists(st.integers(-2, 2), min_size=n * n, max_size=n * n),
                        st.lists(st.sampled_from([1, -1, 2]), min_size=n, max_size=n))))
def test_injective_image_faces_are_images_of_faces(data):
    rays, entries, diag = data
    c = cone_from_rays(rays)
    if not c.is_strongly_convex():
        return
    n = c.rank
    # lower unitriangular times diagonal times upper unitriangular: injective
    lo = [[1 if i == j else (entries[i * n + j] if j < i else 0) for j in range(n)] for i in range(n)]
    up = [[1 if i == j else (entries[j * n + i] if j > i else 0) for j in range(n)] for i in range(n)]
    m = [[sum(lo[i][k] * diag[k] * up[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    f = LatticeMap.from_rows(m, n)
    assert set(faces(image(c, f))) == {image(t, f) for t in faces(c)}
