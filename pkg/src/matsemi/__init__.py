"""Exact computations with submonoids of 2x2 matrices over Q(zeta_N)."""

from .scalar import CyclotomicField, Cyclo, Multiplicity, field
from .projline import PointSet, ProjPoint, infinity, normalize, point
from .mat2 import Mat2
from .pm2 import PM2Elem, pm2_mul, project
from .bfg import Rank1Set, SingularShape, classify, enumerate_closed_subsets
from .multiplicity import SingularPart, compute_multiplicities, lambda_preimage, lambda_product
from .subgroups import GroupSpec, group_closure, orbit_decomposition, is_invariant
from .monoid import MonoidSpec, closure_monoid, intersection_witness_monoid, structure_report

__all__ = [
    "CyclotomicField", "Cyclo", "Multiplicity", "field",
    "PointSet", "ProjPoint", "infinity", "normalize", "point",
    "Mat2", "PM2Elem", "pm2_mul", "project",
    "Rank1Set", "SingularShape", "classify", "enumerate_closed_subsets",
    "SingularPart", "compute_multiplicities", "lambda_preimage", "lambda_product",
    "GroupSpec", "group_closure", "orbit_decomposition", "is_invariant",
    "MonoidSpec", "closure_monoid", "intersection_witness_monoid", "structure_report",
]

__version__ = "0.1.0"
