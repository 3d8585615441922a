from .factorization import (
    FactorizationResult,
    factor_count_bound,
    factorize_mask,
    group_factors,
    pad_with_deltas,
    plan_groups,
)
from .polynomial import RealPolynomial, sequence_of, symbol_of
from .roots import RootFindingMethod, RootMultiset, find_roots

__all__ = [
    "FactorizationResult",
    "RealPolynomial",
    "RootFindingMethod",
    "RootMultiset",
    "factor_count_bound",
    "factorize_mask",
    "find_roots",
    "group_factors",
    "pad_with_deltas",
    "plan_groups",
    "sequence_of",
    "symbol_of",
]
