"""Exact orbit closures in compact nilmanifolds UT(n, R)/UT(n, Z).

The algebraic side (number fields, nilpotent matrices, subalgebras, Malcev
bases, closures) is exact; sampling checks and Weyl sums are numeric.
"""

from .exactfield import QQ, NumberField, Scalar, Subspace, integer_kernel, kernel, rational_components
from .nilcore import (
    GroupSpec,
    NilMatrix,
    PolyMatrix,
    UnipotentElement,
    bracket,
    elementary,
    exp_nil,
    log_unip,
    polymap_eval,
)
from .poly import Poly
from .subalg import Subalgebra, bracket_closure, central_series, normalizer, rational_closure
from .malcev import (
    MalcevBasis,
    psi,
    quotient_distance,
    reduce_mod_lattice,
    second_kind_coords,
    split_coset,
    weak_malcev_through,
)
from .closure import (
    ClosureResult,
    Coset,
    MonomialCurve,
    abelian_nearest_coset,
    orbit_closure,
    polymap_closure,
    smallest_coset_polymap,
    torus_curve_closure,
)
from .equi import NumericCurve, cud_numeric, cud_verdict_polynomial, weyl_sum
from .verify import SamplePlan, hausdorff_check, sample_orbit, sample_predicted

__version__ = "0.1.0"

__all__ = [
    "QQ", "NumberField", "Scalar", "Subspace", "integer_kernel", "kernel", "rational_components",
    "GroupSpec", "NilMatrix", "PolyMatrix", "UnipotentElement", "bracket", "elementary",
    "exp_nil", "log_unip", "polymap_eval", "Poly",
    "Subalgebra", "bracket_closure", "central_series", "normalizer", "rational_closure",
    "MalcevBasis", "psi", "quotient_distance", "reduce_mod_lattice", "second_kind_coords",
    "split_coset", "weak_malcev_through",
    "ClosureResult", "Coset", "MonomialCurve", "abelian_nearest_coset", "orbit_closure",
    "polymap_closure", "smallest_coset_polymap", "torus_curve_closure",
    "NumericCurve", "cud_numeric", "cud_verdict_polynomial", "weyl_sum",
    "SamplePlan", "hausdorff_check", "sample_orbit", "sample_predicted",
    "__version__",
]
