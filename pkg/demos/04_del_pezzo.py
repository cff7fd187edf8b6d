"""Line arrangements in the plane and the del Pezzo construction.

Run with ``python demos/04_del_pezzo.py``.
"""

from mocktoric.arrangement import (
    Arrangement,
    ArrangementError,
    bergman_fan,
    del_pezzo_demo,
    flats,
    structure_from_arrangement,
)
from mocktoric.mock import verify_conditions

lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
arr = Arrangement.of(2, lines)
print("flats of four general lines:", [(f.dim, f.members) for f in flats(arr)])
print("Bergman fan:", len(bergman_fan(arr).fan.rays), "rays")
print("charts:", structure_from_arrangement(arr).phi)

for m, forms in ((2, lines), (3, lines + [(1, 2, 3), (1, -1, 2)])):
    ms = del_pezzo_demo(forms)
    print(f"m = {m}: {len(ms.fan.rays)} rays, conditions pass {verify_conditions(ms).all_pass}")

try:
    del_pezzo_demo(lines[:2])
except ArrangementError as exc:
    print("m = 1:", exc)
