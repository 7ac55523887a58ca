"""Exact curvature and circulant-structure analysis of left-invariant metrics on Lie groups."""

from .constraints import ConstraintSet, GridSpec, canonicalize, equivalent_on_grid, evaluate, parse_grid, sweep
from .exactnum import Polynomial, ScalarExpr, parse_scalar, scalar_arith, scalar_equals, scalar_eval
from .geometry import (
    Connection,
    Curvature04,
    MetricTensor,
    curvature,
    levi_civita,
    ricci_and_scalar,
    sectional,
)
from .liealg import LieAlgebra, bracket, builtin_family, jacobi_residual, make_lie_algebra
from .structures import (
    Endomorphism,
    check_q_structure,
    circulant_shift,
    class_constraints,
    einstein_and_constant_curvature_constraints,
    f_and_theta,
    fprop_residuals,
    r_invariance_constraints,
    rloc_reduced_constraints,
)

__version__ = "0.1.0"
