"""Exact certificates for nilpotent orbits and weak fans."""

__version__ = "0.1.0"

from .linalg import GaussRat, Matrix, Rat, Subspace, Filtration  # noqa: E402
from .domain import HodgeFlag, PolarizedLattice, in_compact_dual, in_period_domain  # noqa: E402
from .limits import (  # noqa: E402
    NotConstant,
    certify_orbit_pair,
    cone_weight_filtration,
    deligne_splitting,
    grading_element,
    rationalize_grading,
    sample_orbit_membership,
    weight_filtration,
)
from .cones import NilpotentCone, contains_point, faces, intersect_cones, make_cone  # noqa: E402
from .arithgroup import GroupElement, enumerate_gamma, intersection_set  # noqa: E402
from .fan import FanCollection, build_weak_fan, cardinality_criterion, make_fan, weak_fan_check  # noqa: E402
