"""End-to-end toroidal certificate for the bundled pipeline case.

Run with ``python demos/03_certify.py``.
"""

import json

from mocktoric import io
from mocktoric.cli import CORPUS_DIR
from mocktoric.lattice import LatticeMap
from mocktoric.toroidal import certify, relative_structure, verify_certificate

inputs = CORPUS_DIR / "inputs"
ms = io.load(inputs / "pipeline-structure.json", "mock")
pi = section = LatticeMap.identity(ms.rank)

# chart polynomials are read in the coordinates of the relative structure
w = relative_structure(ms, pi, section)
data = json.loads((inputs / "pipeline-function.json").read_text(encoding="utf-8"))
cf = io.dec_charted(data, "$", ms=w)

cert = certify(ms, pi, section, cf)
print(f"final fan: {len(cert.final_fan.maximal_cones)} maximal cones, {len(cert.final_fan.rays)} rays")
for ob in cert.ledger:
    print(f"  {ob.status:<11} {ob.item}")

checks = verify_certificate(cert)
print("all established items re-verify:", all(checks.values()))
