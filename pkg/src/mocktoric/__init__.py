"""Exact combinatorics of mock toric structures and toroidal certificates."""

from .arrangement import Arrangement, bergman_fan, del_pezzo_demo, structure_from_arrangement
from .cone import Cone, cone_from_inequalities, cone_from_rays, dual, faces, intersect, multiplicity
from .fan import Fan, fan_validate, make_unimodular, shape_predicates, slice_and_project, star_quotient
from .lattice import LatticeMap, Sublattice, quotient_map, smith_normal_form
from .laurent import LaurentPoly, fineness_certificate, is_fine_fan, linearity_regions, refine_along, val_eval
from .mock import (
    ChartedFunction,
    MockStructure,
    induce_orbit,
    induce_pullback,
    mock_refine_along,
    mock_restrict_orbit,
    verify_conditions,
)
from .toroidal import certify, central_fiber_reduced, dual_monoid, nondegeneracy_probe, verify_certificate

__all__ = [
    "Arrangement", "ChartedFunction", "Cone", "Fan", "LatticeMap", "LaurentPoly", "MockStructure",
    "Sublattice", "bergman_fan", "central_fiber_reduced", "certify", "cone_from_inequalities",
    "cone_from_rays", "del_pezzo_demo", "dual", "dual_monoid", "faces", "fan_validate",
    "fineness_certificate", "induce_orbit", "induce_pullback", "intersect", "is_fine_fan",
    "linearity_regions", "make_unimodular", "mock_refine_along", "mock_restrict_orbit", "multiplicity",
    "nondegeneracy_probe", "quotient_map", "refine_along", "shape_predicates", "slice_and_project",
    "smith_normal_form", "star_quotient", "structure_from_arrangement", "val_eval",
    "verify_certificate", "verify_conditions",
]
__version__ = "0.1.0"
