import logging
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from pydantic import model_validator

from convforge.exceptions import DidNotConverge, ZeroSequence
from convforge.settings import get_settings
from convforge.symbolic.polynomial import RealPolynomial
from convforge.utils.enums import StrChoicesEnum
from convforge.utils.pydantic_types import FrozenModel

logger = logging.getLogger(__name__)

# starting angles are rotated off the real axis so that conjugate roots are not approached symmetrically
_ANGLE_OFFSET = 0.4
_POLISH_STEPS = 3


class RootFindingMethod(StrChoicesEnum):
    ABERTH = "aberth"
    COMPANION = "companion"


class RootMultiset(FrozenModel):
    """
    Complete factorization data of a real polynomial:
    p(z) = leading * prod (z - x)^mult * prod (z^2 - 2 x z + x^2 + y^2)^mult
    """

    real_roots: Tuple[Tuple[float, int], ...] = ()
    conjugate_pairs: Tuple[Tuple[float, float, int], ...] = ()
    leading: float

    @model_validator(mode="after")
    def check_roots(self) -> "RootMultiset":
        for value, multiplicity in self.real_roots:
            if multiplicity < 1:
                raise ValueError(f"Real root {value} has multiplicity {multiplicity}")

        for x, y, multiplicity in self.conjugate_pairs:
            if y <= 0:
                raise ValueError(f"Conjugate pair ({x}, {y}) must be stored with y > 0")
            if multiplicity < 1:
                raise ValueError(f"Conjugate pair ({x}, {y}) has multiplicity {multiplicity}")

        return self

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.real_roots) + 2 * sum(m for _, _, m in self.conjugate_pairs)

    @property
    def complex_count(self) -> int:
        """
        2K, the number of non-real roots counted with multiplicity
        """
        return 2 * sum(m for _, _, m in self.conjugate_pairs)

    def as_complex(self) -> np.ndarray:
        roots: List[complex] = []

        for value, multiplicity in self.real_roots:
            roots.extend([complex(value, 0.0)] * multiplicity)

        for x, y, multiplicity in self.conjugate_pairs:
            roots.extend([complex(x, y), complex(x, -y)] * multiplicity)

        return np.array(roots, dtype=np.complex128)

    def expand(self) -> RealPolynomial:
        coeffs = np.array([self.leading])

        for value, multiplicity in self.real_roots:
            for _ in range(multiplicity):
                coeffs = npoly.polymul(coeffs, linear_factor(value))

        for x, y, multiplicity in self.conjugate_pairs:
            for _ in range(multiplicity):
                coeffs = npoly.polymul(coeffs, quadratic_factor(x, y))

        return RealPolynomial(coeffs=coeffs)


def linear_factor(x: float) -> np.ndarray:
    return np.array([-x, 1.0])


def quadratic_factor(x: float, y: float) -> np.ndarray:
    """
    (z - (x + iy)) (z - (x - iy)) = z^2 - 2 x z + (x^2 + y^2), real by construction
    """
    return np.array([x * x + y * y, -2.0 * x, 1.0])


def backward_errors(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    |p(z)| / sum_k |a_k| |z|^k, the relative residual at each approximation
    """
    scale = npoly.polyval(np.abs(z), np.abs(monic))
    return np.abs(npoly.polyval(z, monic)) / np.maximum(scale, np.finfo(np.float64).tiny)


def _initial_guesses(monic: np.ndarray) -> np.ndarray:
    n = monic.size - 1
    # geometric mean of the root moduli of a monic polynomial
    radius = abs(monic[0]) ** (1.0 / n)
    angles = 2.0 * np.pi * np.arange(n) / n + _ANGLE_OFFSET

    return radius * np.exp(1j * angles)


def aberth(monic: np.ndarray, tol: float, max_iterations: int) -> Tuple[np.ndarray, int]:
    derivative = npoly.polyder(monic)
    z = _initial_guesses(monic)
    n = z.size

    for iteration in range(max_iterations + 1):
        errors = backward_errors(monic, z)
        active = np.flatnonzero(errors > tol)

        if active.size == 0:
            return z, iteration

        if iteration == max_iterations:
            break

        za = z[active]
        p = npoly.polyval(za, monic)
        dp = npoly.polyval(za, derivative)
        ratio = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), p)

        diff = za[:, None] - z[None, :]
        diff[np.arange(active.size), active] = np.inf

        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.sum(1.0 / diff, axis=1)
            denominator = 1.0 - ratio * repulsion
            step = np.where(np.isfinite(denominator) & (denominator != 0), ratio / denominator, ratio)

        z[active] = za - np.nan_to_num(step)

    worst = float(np.max(backward_errors(monic, z))) if n else 0.0
    raise DidNotConverge(worst_residual=worst, iterations=max_iterations)


def newton_polish(monic: np.ndarray, z: np.ndarray, steps: int = _POLISH_STEPS) -> np.ndarray:
    derivative = npoly.polyder(monic)
    z = z.copy()

    for _ in range(steps):
        p = npoly.polyval(z, monic)
        dp = npoly.polyval(z, derivative)
        safe = dp != 0
        candidate = z.copy()
        candidate[safe] = z[safe] - p[safe] / dp[safe]

        improved = backward_errors(monic, candidate) < backward_errors(monic, z)
        z[improved] = candidate[improved]

    return z


def _pair_conjugates(z: np.ndarray, pairing_tol: float) -> Tuple[List[float], List[Tuple[float, float]]]:
    is_real = np.abs(z.imag) <= pairing_tol * (1.0 + np.abs(z))
    reals = [float(v) for v in z[is_real].real]
    upper = sorted(z[~is_real & (z.imag > 0)], key=lambda v: (v.real, v.imag))
    lower = list(z[~is_real & (z.imag < 0)])
    pairs: List[Tuple[float, float]] = []

    for root in upper:
        if not lower:
            reals.append(float(root.real))
            continue

        nearest = int(np.argmin([abs(root - np.conj(candidate)) for candidate in lower]))
        partner = lower.pop(nearest)
        pairs.append((float(root.real + partner.real) / 2.0, float(root.imag - partner.imag) / 2.0))

    # an unmatched root can only come from a misclassified near-real root
    reals.extend(float(root.real) for root in lower)

    return reals, pairs


def _merge_reals(values: List[float], tol: float) -> List[Tuple[float, int]]:
    clusters: List[List[float]] = []

    for value in sorted(values):
        if clusters and abs(value - np.mean(clusters[-1])) <= tol * (1.0 + abs(value)):
            clusters[-1].append(value)
        else:
            clusters.append([value])

    return [(float(np.mean(cluster)), len(cluster)) for cluster in clusters]


def _merge_pairs(values: List[Tuple[float, float]], tol: float) -> List[Tuple[float, float, int]]:
    clusters: List[List[Tuple[float, float]]] = []

    for x, y in sorted(values):
        if clusters:
            cx, cy = np.mean(clusters[-1], axis=0)
            if abs(x - cx) + abs(y - cy) <= tol * (1.0 + abs(complex(x, y))):
                clusters[-1].append((x, y))
                continue

        clusters.append([(x, y)])

    merged = []

    for cluster in clusters:
        x, y = np.mean(cluster, axis=0)
        merged.append((float(x), float(y), len(cluster)))

    return merged


def find_roots(
    p: RealPolynomial,
    tol: Optional[float] = None,
    *,
    max_iterations: Optional[int] = None,
    pairing_tol: Optional[float] = None,
    method: RootFindingMethod = RootFindingMethod.ABERTH,
) -> RootMultiset:
    """
    All complex roots of a real polynomial, classified into real roots and conjugate pairs.

    Roots exactly at zero are deflated before iterating. The remaining monic polynomial is solved by
    simultaneous Aberth iteration from a rotated circle (or by companion-matrix eigenvalues), then
    every root gets a few Newton steps.
    :param tol: target for max |p(z)| / sum |a_k| |z|^k over the returned roots
    :raises DidNotConverge: iteration budget exhausted before every root reached tol
    """
    settings = get_settings()
    tol = tol if tol is not None else settings.root_tol
    max_iterations = max_iterations if max_iterations is not None else settings.max_iterations
    pairing_tol = pairing_tol if pairing_tol is not None else settings.pairing_tol

    if p.is_zero:
        raise ZeroSequence("The zero polynomial has no finite root multiset")

    coeffs = p.trimmed_coeffs()
    zero_roots = int(np.flatnonzero(coeffs)[0])
    monic = coeffs[zero_roots:] / coeffs[-1]
    n = monic.size - 1
    iterations = 0

    if n == 0:
        z = np.zeros(0, dtype=np.complex128)
    elif n == 1:
        z = np.array([-monic[0] + 0j])
    elif method == RootFindingMethod.COMPANION:
        z = newton_polish(monic, npoly.polyroots(monic).astype(np.complex128))
        worst = float(np.max(backward_errors(monic, z)))
        if worst > tol:
            raise DidNotConverge(worst_residual=worst, iterations=0)
    else:
        z, iterations = aberth(monic, tol, max_iterations)
        z = newton_polish(monic, z)

    reals, pairs = _pair_conjugates(z, pairing_tol)
    real_roots = _merge_reals(reals, pairing_tol)

    if zero_roots:
        real_roots = [(0.0, zero_roots)] + real_roots

    result = RootMultiset(
        real_roots=tuple(real_roots), conjugate_pairs=tuple(_merge_pairs(pairs, pairing_tol)), leading=p.leading
    )

    logger.debug(
        f"Found roots of degree {p.degree} polynomial with {method.value}: iterations={iterations}, "
        f"real={len(reals) + zero_roots}, complex={result.complex_count}"
    )

    return result
