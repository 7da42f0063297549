"""Integral Kannappan-sine laws on finite semigroups.

Build semigroups and involutions (``algebra``), functions, measures and
exponentials (``functions``), check equations (``equations``) and construct or
classify solutions (``classify``). ``kannappan.cli`` holds the command line.
"""

from .algebra import (
    FiniteSemigroup,
    InvolutiveAutomorphism,
    direct_product,
    enumerate_involutions,
    find_identity,
    index_period,
    verify_associativity,
)
from .classify import (
    FamilyDescriptor,
    classify,
    classify_t36,
    classify_t44,
    construct,
    construct_t36,
    construct_t44,
    decompose_sine_addition,
    decompose_sine_subtraction,
    lemma_suite_t36,
    lemma_suite_t44,
    validate_descriptor,
    verify_prop31,
)
from .equations import EquationId, is_solution, monoid_reduction_check, residual
from .functions import (
    DiscreteMeasure,
    Exponential,
    enumerate_exponentials,
    fit_measure,
    integrate,
    kannappan_transform,
    sigma_pullback,
    solve_sine_addition_special,
    solve_special_ks_addition,
)
from .linalg import DEFAULT_TOL, ToleranceProfile, nullspace, rank, solve_affine

__version__ = "0.1.0"

__all__ = [
    "FiniteSemigroup",
    "InvolutiveAutomorphism",
    "direct_product",
    "enumerate_involutions",
    "find_identity",
    "index_period",
    "verify_associativity",
    "FamilyDescriptor",
    "classify",
    "classify_t36",
    "classify_t44",
    "construct",
    "construct_t36",
    "construct_t44",
    "decompose_sine_addition",
    "decompose_sine_subtraction",
    "lemma_suite_t36",
    "lemma_suite_t44",
    "validate_descriptor",
    "verify_prop31",
    "EquationId",
    "is_solution",
    "monoid_reduction_check",
    "residual",
    "DiscreteMeasure",
    "Exponential",
    "enumerate_exponentials",
    "fit_measure",
    "integrate",
    "kannappan_transform",
    "sigma_pullback",
    "solve_sine_addition_special",
    "solve_special_ks_addition",
    "DEFAULT_TOL",
    "ToleranceProfile",
    "nullspace",
    "rank",
    "solve_affine",
]
