"""Refining a fan along a Laurent polynomial until it becomes fine.

Run with ``python demos/02_refine_along.py``.
"""

from mocktoric.fan import quadrant
from mocktoric.laurent import LaurentPoly, is_fine_fan, linearity_regions, refine_along, val_eval

f = LaurentPoly(2, {(1, 0): 1, (0, 1): 1})  # x + y
fan = quadrant()

print("val(x + y) at (2, 3):", val_eval(f, (2, 3)))
print("quadrant fine for x + y?", is_fine_fan(fan, f).fine)

for region in linearity_regions(f, fan.maximal_cones[0]):
    if region.cone.dim == 2:
        print("linearity region", region.cone.rays, "minimiser", region.witness_exponent)

refined = refine_along(fan, f)
print("refined maximal cones:", [c.rays for c in refined.maximal_cones])
report = is_fine_fan(refined, f)
print("refined fan fine?", report.fine)
for cone, cert in report.certificates:
    if cone.dim == 1:
        print(f"  ray {cone.rays[0]}: certificate {cert}")
