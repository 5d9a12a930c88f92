"""Translation-invariant splitting Gibbs measures of the (2,q)-Ising-Potts
model on Cayley trees: exact root counting, the boundary-law operator, and
finite-volume compatibility checks."""

from .boundary_law import BoundaryField, apply_W, iterate_W, is_fixed_point
from .isingpotts_model import ModelParams, build_slice, check_compatibility
from .polyroot import Polynomial, count_roots, isolate_and_refine, sturm_chain
from .tigm_solver import (
    PhaseClassification,
    TigmSolution,
    classify_case1,
    classify_case2_k2_q3,
    count_quartic_positive_roots,
    find_thresholds,
    solve_case1,
)

__all__ = [
    "BoundaryField",
    "ModelParams",
    "PhaseClassification",
    "Polynomial",
    "TigmSolution",
    "apply_W",
    "build_slice",
    "check_compatibility",
    "classify_case1",
    "classify_case2_k2_q3",
    "count_quartic_positive_roots",
    "count_roots",
    "find_thresholds",
    "is_fixed_point",
    "isolate_and_refine",
    "iterate_W",
    "solve_case1",
    "sturm_chain",
]
