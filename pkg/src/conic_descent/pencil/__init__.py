"""Pencils of affine conics a p_A(t,s) x^2 + b p_B(t,s) y^2 = 1."""
from .admissible import (
    AdmissiblePair, FiberSelmer, NotAdmissible, admissible_pairs, fiber_weak_dual_selmer,
    is_admissible,
)
from .brauer import (
    AdelicStub, InconsistentConstraints, LocalPoint, brauer_pairing, find_witness_prime,
    lemma_fiber_test, reduction_twist,
)
from .groups import (
    ConditionD, compute_GD, compute_GDhat, condition_D, lemma_explicit_conditions,
    vertical_brauer_basis,
)
from .model import (
    DegenerateFiber, FormalClass, Pencil, D_class, Dhat_class, bad_places, delta, fiber,
)
from .refine import RefineStep, main_step
from .search import PointSearch, SearchConfig, find_integral_point, verify_point
from .stub import SuitableStub, find_stub, suitable_stub
from .theorems import VARIANTS, ShapeError, TheoremReport, theorem_check

__all__ = [
    "AdmissiblePair", "FiberSelmer", "NotAdmissible", "admissible_pairs",
    "fiber_weak_dual_selmer", "is_admissible", "AdelicStub", "InconsistentConstraints",
    "LocalPoint", "brauer_pairing", "find_witness_prime", "lemma_fiber_test",
    "reduction_twist", "ConditionD", "compute_GD", "compute_GDhat", "condition_D",
    "lemma_explicit_conditions", "vertical_brauer_basis", "DegenerateFiber", "FormalClass",
    "Pencil", "D_class", "Dhat_class", "bad_places", "delta", "fiber", "RefineStep",
    "main_step", "PointSearch", "SearchConfig", "find_integral_point", "verify_point",
    "SuitableStub", "find_stub", "suitable_stub", "VARIANTS", "ShapeError", "TheoremReport",
    "theorem_check",
]
