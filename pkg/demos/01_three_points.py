"""A line with three marked points, seen as a mock toric structure.

Run with ``python demos/01_three_points.py``.
"""

from mocktoric.arrangement import Arrangement, bergman_fan, structure_from_arrangement
from mocktoric.catalog import three_point_line, three_point_line_torsion
from mocktoric.cone import cone_from_rays
from mocktoric.mock import induce_orbit, verify_conditions

ms = three_point_line()
print("rays of the fan:", ms.fan.rays)
for p in ms.phi:
    print(f"chart {p}: N_phi = {ms.sublattices[p].basis}, chart map {ms.chart_map(p).matrix}")

rep = verify_conditions(ms)
print("conditions pass:", rep.all_pass)

# doubling one chart lattice makes the quotient torsion
bad = verify_conditions(three_point_line_torsion())
print("torsion mutation, condition 1:", bad["1"].passed, "witness", bad["1"].witness)

# the orbit over a ray is a point with two charts left
orbit = induce_orbit(ms, cone_from_rays([(-1, -1)]))
print("orbit at e0: rank", orbit.rank, "charts", orbit.phi)

# the same structure falls out of the Bergman fan of three points on P^1
arr = Arrangement.of(1, [(1, 0), (0, 1), (1, 1)])
print("Bergman fan rays:", bergman_fan(arr).fan.rays)
print("arrangement charts:", structure_from_arrangement(arr).phi)
