import logging
from itertools import combinations
from math import ceil
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from pydantic import Field, model_validator

from convforge.exceptions import DepthTooSmall, InvalidFilterLength, ZeroSequence
from convforge.settings import get_settings
from convforge.signal.sequences import FiniteSequence, delta, fold_convolve
from convforge.symbolic.polynomial import RealPolynomial, sequence_of, symbol_of
from convforge.symbolic.roots import (
    RootFindingMethod,
    RootMultiset,
    find_roots,
    linear_factor,
    quadratic_factor,
)
from convforge.utils.context_managers import log_execution_time
from convforge.utils.pydantic_types import FrozenModel

logger = logging.getLogger(__name__)

_BALANCE_PASSES = 64
_BALANCE_GAIN = 1e-12


class FactorizationResult(FrozenModel):
    """
    W = w^(J) * ... * w^(1) with masks = [w^(1), ..., w^(J)], each supported in {0, ..., s}
    """

    masks: Tuple[FiniteSequence, ...]
    s: int = Field(..., ge=2)
    degree: int = Field(..., ge=0)
    reconstruction: FiniteSequence
    max_rel_error: float = Field(..., ge=0)

    @property
    def J(self) -> int:
        return len(self.masks)

    @model_validator(mode="after")
    def check_factors(self) -> "FactorizationResult":
        if not self.masks:
            raise ValueError("A factorization holds at least one mask")

        for mask in self.masks:
            if mask.degree > self.s:
                raise ValueError(f"Mask degree {mask.degree} exceeds s={self.s}")

        # J < M/(s-1) + 1, written over the integers
        if self.degree >= 1 and self.J * (self.s - 1) >= self.degree + self.s - 1:
            raise ValueError(f"J={self.J} violates J < M/(s-1) + 1 for M={self.degree}, s={self.s}")

        return self


def _check_filter_length(s: int) -> None:
    if s < 2:
        raise InvalidFilterLength("s must be ≥ 2", {"s": s})


def plan_groups(n_quadratic: int, n_linear: int, s: int) -> List[Tuple[int, int]]:
    """
    Per-factor (quadratics, linears) counts packing every factor into degree <= s with the fewest factors.

    Quadratics go floor(s/2) to a factor first, linears fill the remaining slots, then linears open new
    factors of s each. This reaches max(ceil(M/s), ceil(K/floor(s/2))) factors, which is optimal.
    """
    _check_filter_length(s)
    per_factor = s // 2
    plan: List[List[int]] = []

    remaining = n_quadratic
    while remaining > 0:
        taken = min(per_factor, remaining)
        plan.append([taken, 0])
        remaining -= taken

    remaining = n_linear
    for group in plan:
        taken = min(s - 2 * group[0], remaining)
        group[1] = taken
        remaining -= taken

    while remaining > 0:
        taken = min(s, remaining)
        plan.append([0, taken])
        remaining -= taken

    return [(q, r) for q, r in plan]


def _leja_pick(candidates: List[complex], placed: List[complex]) -> int:
    """
    Index of the candidate maximising the product of distances to the roots already in the factor
    """
    if not placed:
        return int(np.argmax([abs(c) for c in candidates]))

    with np.errstate(divide="ignore"):
        scores = [float(np.sum(np.log(np.abs(c - np.asarray(placed))))) for c in candidates]

    return int(np.argmax(scores))


def _unit_factor(root: complex) -> np.ndarray:
    # conjugate pairs are stored with imag > 0, real roots with imag == 0
    return quadratic_factor(root.real, root.imag) if root.imag else linear_factor(root.real)


def _log_l1(group: Sequence[complex]) -> float:
    coeffs = np.array([1.0])

    for root in group:
        coeffs = np.convolve(coeffs, _unit_factor(root))

    return float(np.log(np.sum(np.abs(coeffs))))


def _deal(units: Sequence[complex], capacities: Sequence[int]) -> List[List[complex]]:
    """
    Round-robin over the factors, skipping the ones already full
    """
    groups: List[List[complex]] = [[] for _ in capacities]
    slot = 0

    for unit in units:
        while len(groups[slot]) == capacities[slot]:
            slot = (slot + 1) % len(groups)

        groups[slot].append(unit)
        slot = (slot + 1) % len(groups)

    return groups


def _balance(groups: List[List[complex]]) -> None:
    """
    Swap same-degree units between factors while the sum of log ||f||_1 drops
    """
    costs = [_log_l1(group) for group in groups]

    for _ in range(_BALANCE_PASSES):
        improved = False

        for a, b in combinations(range(len(groups)), 2):
            for i in range(len(groups[a])):
                for j in range(len(groups[b])):
                    left, right = groups[a][i], groups[b][j]

                    if bool(left.imag) != bool(right.imag) or left == right:
                        continue

                    trial_a = groups[a][:i] + [right] + groups[a][i + 1 :]
                    trial_b = groups[b][:j] + [left] + groups[b][j + 1 :]
                    cost_a, cost_b = _log_l1(trial_a), _log_l1(trial_b)

                    if cost_a + cost_b < costs[a] + costs[b] - _BALANCE_GAIN:
                        groups[a], groups[b] = trial_a, trial_b
                        costs[a], costs[b] = cost_a, cost_b
                        improved = True

        if not improved:
            return


def _expand(group: List[complex]) -> np.ndarray:
    """
    Monic product of the group's units, multiplied in Leja order
    """
    pending = list(group)
    placed: List[complex] = []
    coeffs = np.array([1.0])

    while pending:
        root = pending.pop(_leja_pick(pending, placed))
        placed.extend([root, root.conjugate()] if root.imag else [root])
        coeffs = npoly.polymul(coeffs, _unit_factor(root))

    return coeffs


def group_factors(roots: RootMultiset, s: int) -> List[RealPolynomial]:
    """
    Real factors of degree 1..s whose product is the polynomial described by roots.

    plan_groups fixes how many quadratics and linears each factor takes. Conjugate pairs are dealt
    to the factors in order of argument and real roots in order of value, then pairwise swaps lower
    prod ||f||_1, the bias scale B^(J) of a network built on the factors. Inside a factor roots are
    multiplied in Leja order. The leading scalar is spread as |W_M|^(1/J) over every factor with its
    sign on the last one.
    """
    _check_filter_length(s)

    quadratics = [complex(x, y) for x, y, m in roots.conjugate_pairs for _ in range(m)]
    linears = [complex(x, 0.0) for x, m in roots.real_roots for _ in range(m)]

    if not quadratics and not linears:
        return [RealPolynomial(coeffs=[roots.leading])]

    plan = plan_groups(len(quadratics), len(linears), s)
    by_angle = sorted(quadratics, key=lambda root: (np.angle(root), abs(root)))
    by_value = sorted(linears, key=lambda root: root.real)
    quadratic_groups = _deal(by_angle, [n_quadratic for n_quadratic, _ in plan])
    linear_groups = _deal(by_value, [n_linear for _, n_linear in plan])

    groups = [pairs + reals for pairs, reals in zip(quadratic_groups, linear_groups, strict=True)]
    _balance(groups)
    factors = [_expand(group) for group in groups]

    scale = abs(roots.leading) ** (1.0 / len(factors))
    factors = [coeffs * scale for coeffs in factors]
    factors[-1] = factors[-1] * np.sign(roots.leading)

    logger.debug(f"Grouped {roots.degree} roots into {len(factors)} factors, prod ||f||_1={_l1_product(factors):.6e}")

    return [RealPolynomial(coeffs=coeffs) for coeffs in factors]


def _l1_product(factors: Sequence[np.ndarray]) -> float:
    return float(np.prod([np.sum(np.abs(coeffs)) for coeffs in factors]))


def _relative_error(actual: FiniteSequence, expected: FiniteSequence) -> float:
    size = max(actual.support_hint, expected.support_hint) + 1
    diff = np.abs(actual.with_support(size - 1).coeffs - expected.with_support(size - 1).coeffs)
    return float(np.max(diff)) / float(np.max(np.abs(expected.coeffs)))


def factorize_mask(
    W: FiniteSequence,
    s: int,
    tol: Optional[float] = None,
    *,
    method: RootFindingMethod = RootFindingMethod.ABERTH,
    max_iterations: Optional[int] = None,
) -> FactorizationResult:
    """
    Convolutional factorization of W into masks supported in {0, ..., s}.

    The factor count is measured against the effective degree M of W; since M <= support_hint the bound
    J < support_hint/(s-1) + 1 holds as well.
    :raises InvalidFilterLength: s < 2
    :raises ZeroSequence: W is the zero sequence
    :raises DidNotConverge: propagated from the root finder
    """
    _check_filter_length(s)

    if W.is_zero:
        raise ZeroSequence("The zero sequence has no convolutional factorization")

    M = W.degree

    with log_execution_time("Convolutional factorization", logger, degree=M, s=s):
        if M <= s:
            masks = [W.with_support(s)]
        else:
            roots = find_roots(symbol_of(W), tol, max_iterations=max_iterations, method=method)
            masks = [sequence_of(factor, support_hint=s) for factor in group_factors(roots, s)]

        reconstruction = fold_convolve(masks).with_support(max(W.support_hint, M))
        max_rel_error = _relative_error(reconstruction, W)

    if max_rel_error > get_settings().reconstruction_tol:
        logger.warning(f"Factorization of degree {M} sequence reproduces it only to relative {max_rel_error:.3e}")
    else:
        logger.debug(f"Factorized degree {M} sequence into {len(masks)} masks, relative error {max_rel_error:.3e}")

    return FactorizationResult(
        masks=tuple(masks), s=s, degree=M, reconstruction=reconstruction, max_rel_error=max_rel_error
    )


def pad_with_deltas(masks: Sequence[FiniteSequence], J_target: int) -> List[FiniteSequence]:
    if J_target < len(masks):
        raise DepthTooSmall(J_target, len(masks))

    support_hint = masks[0].support_hint if masks else 0
    return list(masks) + [delta(support_hint) for _ in range(J_target - len(masks))]


def factor_count_bound(degree: int, s: int) -> int:
    """
    Upper bound on J guaranteed by the grouping: ceil(M/(s-1)) for M >= 1, and 1 for constants
    """
    _check_filter_length(s)
    return max(1, ceil(degree / (s - 1)))
