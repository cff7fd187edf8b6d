import random

import pytest

from mocktoric.arrangement import Arrangement, random_arrangement, structure_from_arrangement
from mocktoric.catalog import three_point_line, three_point_line_collapsing, three_point_line_torsion, toric
from mocktoric.cone import cone_from_rays, image, zero_cone
from mocktoric.fan import (
    Fan,
    half_line,
    product_fan,
    projective_plane,
    quadrant,
    stellar_subdivide,
)
from mocktoric.lattice import LatticeMap, invariant_factors, saturate_rows
from mocktoric.laurent import LaurentPoly, is_fine_fan, refine_along, val_eval
from mocktoric.mock import (
    ChartedFunction,
    InconsistentChartsError,
    MockStructure,
    MockStructureError,
    check_consistency,
    induce_orbit,
    induce_pullback,
    mock_fineness,
    mock_pullback,
    mock_refine_along,
    mock_restrict_orbit,
    mock_val_eval,
    relative_correspondences,
    verify_conditions,
)
from generators import random_stellar
from oracles import box, in_cone, qrank

E1, E2, E0 = (1, 0), (0, 1), (-1, -1)
U = LaurentPoly(1, {(0,): 1, (1,): 1})  # 1 + u


def four_lines():
    return structure_from_arrangement(Arrangement.of(2, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]))


def five_lines():
    return structure_from_arrangement(
        Arrangement.of(2, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]))


def coordinate_plane():
    return structure_from_arrangement(Arrangement.of(2, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))


def height_zero(n):
    """x -> (x, 0)."""
    return LatticeMap.from_rows([[int(i == j) for j in range(n)] for i in range(n)] + [[0] * n], n)


def pr1(n):
    return LatticeMap.from_rows([[int(i == j) for j in range(n + 1)] for i in range(n)], n + 1)


def relative(ms):
    n = ms.rank
    return induce_pullback(ms, pr1(n), height_zero(n), product_fan(ms.fan, half_line()))


# examples ----------------------------------------------------------------


def test_three_point_line_passes():
    rep = verify_conditions(three_point_line())
    assert rep.all_pass
    assert rep["4"].passed is None and rep["4"].note == "user obligation"


def test_torsion_mutation_fails_condition_one():
    rep = verify_conditions(three_point_line_torsion())
    assert rep["1"].passed is False and rep["1"].witness[0] == "0"
    assert rep["2"].passed and rep["3"].passed


def test_collapsing_mutation_fails_condition_three():
    rep = verify_conditions(three_point_line_collapsing())
    assert rep["3"].passed is False
    assert rep["3"].witness == ("0", cone_from_rays([E0]))


def test_condition_two_failure():
    ms = three_point_line()
    fans = dict(ms.subfans)
    fans["1"] = Fan(2, [zero_cone(2), cone_from_rays([E2])])
    fans["2"] = Fan(2, [zero_cone(2), cone_from_rays([E1])])
    broken = MockStructure(2, ms.fan, ms.phi, dict(ms.sublattices), fans)
    rep = verify_conditions(broken)
    assert rep["2"].passed is False and rep["2"].witness == (None, cone_from_rays([E0]))


def test_structure_rejects_non_face_closed_subfan():
    ms = three_point_line()
    fans = dict(ms.subfans)
    fans["1"] = Fan(2, [cone_from_rays([E2])])
    with pytest.raises(MockStructureError):
        MockStructure(2, ms.fan, ms.phi, dict(ms.sublattices), fans)


def test_induce_orbit_at_ray_e0():
    o = induce_orbit(three_point_line(), cone_from_rays([E0]))
    assert o.rank == 1 and o.phi == ("1", "2")
    assert o.fan.cones == (zero_cone(1),)
    assert verify_conditions(o).all_pass
    assert o.provenance == "induced-orbit"


def test_induce_orbit_at_zero_cone():
    ms = three_point_line()
    assert induce_orbit(ms, zero_cone(2)) == ms


def test_induce_orbit_at_two_cone_gives_a_point():
    ms = coordinate_plane()
    top = ms.fan.maximal_cones[0]
    o = induce_orbit(ms, top)
    assert o.rank == 0 and verify_conditions(o).all_pass


def test_induce_pullback_identity():
    ms = three_point_line()
    ident = LatticeMap.identity(2)
    assert induce_pullback(ms, ident, ident, ms.fan) == ms


def test_induce_pullback_stellar_interior_ray():
    ms = coordinate_plane()
    top = next(c for c in ms.fan.maximal_cones if c.dim == 2)
    f2 = stellar_subdivide(ms.fan, top.interior_point())
    ident = LatticeMap.identity(2)
    assert verify_conditions(induce_pullback(ms, ident, ident, f2)).all_pass


def test_induce_pullback_along_first_projection():
    z1 = relative(three_point_line())
    assert z1.rank == 3 and verify_conditions(z1).all_pass
    for p in z1.phi:
        assert all(b[-1] == 0 for b in z1.sublattices[p].basis)


def test_induce_pullback_rejects_bad_section():
    ms = three_point_line()
    with pytest.raises(MockStructureError):
        induce_pullback(ms, LatticeMap.identity(2), LatticeMap.from_rows([[1, 1], [0, 1]], 2), ms.fan)


def test_relative_correspondences_pass_and_fail():
    z1 = relative(three_point_line())
    assert relative_correspondences(z1).passed
    trivial = toric(Fan(1, [zero_cone(1)]))
    assert relative_correspondences(trivial).passed
    # drop the star of one height-0 cone from one chart
    p = z1.phi[0]
    c = next(c for c in z1.subfans[p].cones if c.dim == 1 and c.rays[0][-1] == 0)
    fans = dict(z1.subfans)
    fans[p] = Fan(3, [t for t in z1.subfans[p].cones if not c.ray_set <= t.ray_set])
    broken = MockStructure(3, z1.fan, z1.phi, dict(z1.sublattices), fans, z1.provenance, z1.origin)
    rep = relative_correspondences(broken)
    assert not rep.passed and rep.witness[0] == p


def test_mock_val_eval_examples():
    f = LaurentPoly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    ms = toric(projective_plane())
    cf = ChartedFunction({"0": f})
    for v in box(2, 2):
        assert mock_val_eval(ms, cf, v) == val_eval(f, v)
    line = three_point_line()
    cf2 = ChartedFunction({p: U for p in line.phi})
    assert mock_val_eval(line, cf2, E1) == 0
    with pytest.raises(InconsistentChartsError):
        mock_val_eval(line, cf2, E2)
    mono = ChartedFunction({"0": LaurentPoly.monomial((2,)), "1": LaurentPoly.monomial((-1,)),
                            "2": LaurentPoly.monomial((3,))})
    for p in line.phi:
        for r in line.subfans[p].rays:
            q = line.chart_map(p)(r)[0]
            assert mono.value_at(line, p, r) == q * mono.charts[p].support[0][0]


def consistent_three_point_function():
    # chart 0 needs the unit χ^(0,1) to agree with charts 1 and 2
    return ChartedFunction({p: U for p in ("0", "1", "2")}, {"0": (0, 1)})


def test_charted_function_consistency():
    ms = three_point_line()
    assert check_consistency(ms, consistent_three_point_function()).consistent
    bad = ChartedFunction({p: U for p in ms.phi})
    rep = check_consistency(ms, bad)
    assert not rep.consistent and rep.witness[0] == E2


def test_mock_refine_examples():
    f = LaurentPoly(2, {(0, 0): 1, (1, 0): 1, (0, 2): 1})
    ms = toric(quadrant())
    assert mock_refine_along(ms, ChartedFunction({"0": f})) == refine_along(quadrant(), f)
    line = three_point_line()
    assert mock_refine_along(line, consistent_three_point_function()) == line.fan
    plane = coordinate_plane()
    (label,) = plane.phi
    g = LaurentPoly(2, {(1, 0): 1, (0, 2): 1})
    out = mock_refine_along(plane, ChartedFunction({label: g}))
    assert (2, 1) in out.rays
    split = cone_from_rays([(1, 0), (1, 1)])
    assert split in plane.fan and split not in out


def test_inconsistent_charts_refuse_refinement():
    ms = three_point_line()
    with pytest.raises(InconsistentChartsError):
        mock_refine_along(ms, ChartedFunction({p: U for p in ms.phi}))


def test_mock_fineness_examples():
    f = LaurentPoly(2, {(1, 0): 1, (0, 1): 1})
    ms = toric(quadrant())
    cf = ChartedFunction({"0": f})
    rep = mock_fineness(ms, cf)
    assert not rep.fine
    assert dict((c, x) for c, _, x in rep.certificates)[quadrant().maximal_cones[0]] is None
    assert [x for _, _, x in rep.certificates] == [x for _, x in is_fine_fan(quadrant(), f).certificates]
    refined = mock_refine_along(ms, cf)
    ident = LatticeMap.identity(2)
    assert mock_fineness(induce_pullback(ms, ident, ident, refined), cf).fine


def test_mock_restrict_orbit_toric():
    f = LaurentPoly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    ms = toric(projective_plane())
    induced, cf = mock_restrict_orbit(ms, ChartedFunction({"0": f}), cone_from_rays([E1]))
    assert induced.rank == 1
    assert cf.charts["0"] in (U, LaurentPoly(1, {(0,): 1, (-1,): 1}))


def test_mock_pullback_examples():
    ms = three_point_line()
    cf = consistent_three_point_function()
    ident = LatticeMap.identity(2)
    same = mock_pullback(ms, cf, ident, ident)
    assert same.charts == cf.charts and same.units == cf.units
    mono = ChartedFunction({"0": LaurentPoly.monomial((1, -2))})
    t = toric(quadrant())
    padded = mock_pullback(t, mono, pr1(2), height_zero(2))
    assert padded.charts["0"] == LaurentPoly.monomial((1, -2, 0))


# properties ------------------------------------------------------------


def corpus_structures():
    rng = random.Random(7)
    out = [three_point_line(), four_lines(), five_lines(), coordinate_plane(), toric(projective_plane())]
    out += [structure_from_arrangement(random_arrangement(rng, 2, 4)) for _ in range(3)]
    return out


@pytest.mark.parametrize("idx", range(8))
def test_orbit_structures_re_pass(idx):
    ms = corpus_structures()[idx]
    assert verify_conditions(ms).all_pass
    for s in ms.fan.cones:
        assert verify_conditions(induce_orbit(ms, s)).all_pass


@pytest.mark.parametrize("seed", range(6))
def test_pullback_structures_re_pass(seed):
    rng = random.Random(seed)
    ms = corpus_structures()[seed % 5]
    ident = LatticeMap.identity(ms.rank)
    fine = random_stellar(rng, ms.fan, steps=2)
    assert verify_conditions(induce_pullback(ms, ident, ident, fine)).all_pass
    rel = relative(ms)
    assert verify_conditions(rel).all_pass
    assert relative_correspondences(rel).passed
    finer = random_stellar(rng, rel.fan, steps=2)
    assert verify_conditions(induce_pullback(ms, pr1(ms.rank), height_zero(ms.rank), finer)).all_pass


@pytest.mark.parametrize("idx", range(8))
def test_chart_lattice_shadows(idx):
    ms = corpus_structures()[idx]
    ranks = {ms.rank - ms.sublattices[p].rank for p in ms.phi}
    assert len(ranks) == 1
    for p in ms.phi:
        nb = list(ms.sublattices[p].basis)
        q = ms.chart_map(p)
        for c in ms.subfans[p].cones:
            # span(σ) meets N_φ only in 0
            assert qrank(list(c.rays) + nb) == c.dim + len(nb)
            # q_φ maps span(σ) ∩ N isomorphically onto its image lattice
            basis = saturate_rows(c.rays, ms.rank)
            if basis:
                assert invariant_factors([list(q(b)) for b in basis]) == [1] * len(basis)
            assert image(c, q).dim == c.dim


@pytest.mark.parametrize("idx", range(5))
def test_chart_maps_separate_points_of_their_support(idx):
    ms = corpus_structures()[idx]
    for p in ms.phi:
        seen = {}
        for v in box(ms.rank, 2):
            if any(in_cone(c.rays, v) for c in ms.subfans[p].maximal_cones):
                key = ms.chart_map(p)(v)
                assert seen.setdefault(key, v) == v


def test_val_is_chart_independent_on_the_pipeline_case(pipeline_case):
    _, _, _, w, cf = pipeline_case
    assert check_consistency(w, cf).consistent
    for v in box(w.rank, 2):
        if v[-1] < 0:
            continue
        charts = [p for p in w.phi if w.subfans[p].in_support(v)]
        values = {cf.value_at(w, p, v) for p in charts}
        assert len(values) <= 1
