"""Sumsets and signed sumsets over finite abelian groups.

Library surface: invariant-factor group arithmetic, bit-mask sumset kernels,
the closed-form minimum-size functions with their digit-index
characterizations, exhaustive minimum oracles restricted to the structured
search families, and a CLI harness for theorem and conjecture sweeps.
"""

__version__ = "0.1.0"

from .formulas import (
    DigitProfile,
    EqualityCertificate,
    ScaleProfile,
    bounds_coincide,
    conjectured_rank2_size,
    conjectured_signed_size,
    digit_profile,
    divisor_term,
    equality_certificate,
    min_sumset_minimizers,
    min_sumset_size,
    rank2_equality,
    scale_profile,
    signed_bound_minimizer_exponents,
    signed_size_bound,
    signed_size_bound_minimizers,
    sumset_minimizer_exponents,
)
from .groups import (
    DEFAULT_ORDER_CAP,
    ElementSet,
    EmptySetError,
    GroupSpec,
    ParameterError,
    abelian_group_specs,
    divisors,
    feasible_divisors,
    invariant_factors,
    parse_group,
)
from .search import (
    BudgetExceededError,
    Family,
    InfeasibleFamilyError,
    OracleResult,
    SearchSpace,
    default_budget,
    enumerate_family,
    family_cardinality,
    make_search_space,
    min_signed_oracle,
    min_sumset_oracle,
    sample_upper_bound,
)
from .sumsets import (
    SymmetryClass,
    classify_symmetry,
    h_fold_signed_sumset,
    h_fold_sumset,
    in_minimizer_family,
    pairwise_sumset,
)

__all__ = [
    "__version__",
    "DEFAULT_ORDER_CAP",
    "BudgetExceededError",
    "DigitProfile",
    "ElementSet",
    "EmptySetError",
    "EqualityCertificate",
    "Family",
    "GroupSpec",
    "InfeasibleFamilyError",
    "OracleResult",
    "ParameterError",
    "ScaleProfile",
    "SearchSpace",
    "SymmetryClass",
    "abelian_group_specs",
    "bounds_coincide",
    "classify_symmetry",
    "conjectured_rank2_size",
    "conjectured_signed_size",
    "default_budget",
    "digit_profile",
    "divisor_term",
    "divisors",
    "enumerate_family",
    "equality_certificate",
    "family_cardinality",
    "feasible_divisors",
    "h_fold_signed_sumset",
    "h_fold_sumset",
    "in_minimizer_family",
    "invariant_factors",
    "make_search_space",
    "min_signed_oracle",
    "min_sumset_minimizers",
    "min_sumset_oracle",
    "min_sumset_size",
    "pairwise_sumset",
    "parse_group",
    "rank2_equality",
    "sample_upper_bound",
    "scale_profile",
    "signed_bound_minimizer_exponents",
    "signed_size_bound",
    "signed_size_bound_minimizers",
    "sumset_minimizer_exponents",
]
