"""Small named structures used by the demos, tests and the bundled corpus."""

from __future__ import annotations

from .fan import Fan, fan_from_maximal
from .lattice import Sublattice
from .mock import MockStructure

E1, E2, E0 = (1, 0), (0, 1), (-1, -1)
_LINE_RAYS = {"0": E0, "1": E1, "2": E2}


def three_point_line() -> MockStructure:
    """ℙ¹ minus nothing, sitting in ℙ² along the three coordinate points.

    N = Z², rays e0, e1, e2 with e0 + e1 + e2 = 0, no 2-cones; chart i uses
    N_i = Z·e_i and the subfan without the ray e_i.
    """
    rays = [E0, E1, E2]
    fan = fan_from_maximal(2, rays, [[0], [1], [2]])
    subs, fans = {}, {}
    for label, e in _LINE_RAYS.items():
        subs[label] = Sublattice(2, (e,))
        fans[label] = Fan(2, [c for c in fan.cones if c.rays != (e,)])
    return MockStructure(2, fan, ("0", "1", "2"), subs, fans)


def three_point_line_torsion() -> MockStructure:
    """Chart 0 uses Z·(-2,-2): the chart quotient acquires torsion."""
    ms = three_point_line()
    subs = dict(ms.sublattices)
    subs["0"] = Sublattice(2, ((-2, -2),))
    return MockStructure(2, ms.fan, ms.phi, subs, dict(ms.subfans))


def three_point_line_collapsing() -> MockStructure:
    """Chart 0 covers all of Δ, so q_0 kills the ray e0."""
    ms = three_point_line()
    fans = dict(ms.subfans)
    fans["0"] = ms.fan
    return MockStructure(2, ms.fan, ms.phi, dict(ms.sublattices), fans)


def toric(fan: Fan, label: str = "0") -> MockStructure:
    """The toric structure: one chart with N_0 = 0 and Δ_0 = Δ."""
    return MockStructure(fan.rank, fan, (label,), {label: Sublattice.zero(fan.rank)}, {label: fan})
