from typing import List, Optional

import numpy as np

from convforge.network.ridge import RidgeExpansion, RidgeTerm
from convforge.signal.sequences import FiniteSequence
from convforge.utils.numeric import max_abs_difference, scale_of


def random_mask(rng: np.random.Generator, s: int, low: float = 0.5, high: float = 1.5) -> FiniteSequence:
    """
    Mask supported in {0, ..., s} with entries of magnitude in [low, high] and random signs
    """
    values = rng.uniform(low, high, size=s + 1) * rng.choice([-1.0, 1.0], size=s + 1)
    return FiniteSequence.from_coeffs(values, support_hint=s)


def random_masks(rng: np.random.Generator, s: int, count: int) -> List[FiniteSequence]:
    return [random_mask(rng, s) for _ in range(count)]


def random_direction(rng: np.random.Generator, d: int) -> np.ndarray:
    direction = rng.standard_normal(d)
    return direction / np.sum(np.abs(direction))


def random_ridge(rng: np.random.Generator, d: int, m: int, v: Optional[float] = None) -> RidgeExpansion:
    terms = tuple(
        RidgeTerm(beta=float(rng.uniform(-1, 1)), alpha=random_direction(rng, d), t=float(rng.uniform(0, 1)))
        for _ in range(m)
    )

    return RidgeExpansion(
        beta0=float(rng.uniform(-1, 1)),
        alpha0=rng.uniform(-1, 1, size=d),
        v=float(rng.uniform(0.5, 2.0)) if v is None else v,
        terms=terms,
    )


def uniform_points(rng: np.random.Generator, count: int, d: int, bound: float = 1.0) -> np.ndarray:
    return rng.uniform(-bound, bound, size=(count, d))


def assert_close_scaled(actual: object, expected: object, tol: float) -> None:
    """
    max |actual - expected| <= tol * max(1, max |expected|)
    """
    deviation = max_abs_difference(actual, expected)
    bound = tol * scale_of(expected)

    assert deviation <= bound, f"max deviation {deviation:.3e} exceeds {bound:.3e}"
