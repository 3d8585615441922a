import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.stats import qmc

from convforge.approx.targets import TargetFunction
from convforge.exceptions import DimensionMismatch, InvalidRidgeExpansion
from convforge.network.ridge import RidgeExpansion, RidgeTerm
from convforge.settings import get_settings
from convforge.utils.context_managers import log_execution_time
from convforge.utils.enums import StrChoicesEnum

logger = logging.getLogger(__name__)

TRAINING_POINTS = 2048


class FitStrategy(StrChoicesEnum):
    # orthogonal matching pursuit over the seeded pool; nested in m
    GREEDY = "greedy"
    # least squares on the first m atoms of the pool
    RANDOM = "random"


def central_gradient(target: TargetFunction, d: int, step: float) -> np.ndarray:
    offsets = step * np.eye(d)
    forward, backward = target(offsets), target(-offsets)
    return (forward - backward) / (2.0 * step)


def normalize_atom(direction: np.ndarray, threshold: float) -> Tuple[np.ndarray, float, float]:
    """
    (a . x - t)_+ = |a|_1 (a/|a|_1 . x - t/|a|_1)_+; returns the unit direction, the rescaled threshold and |a|_1
    """
    norm = float(np.sum(np.abs(direction)))

    if norm == 0:
        raise InvalidRidgeExpansion("Ridge direction must be nonzero")

    return direction / norm, threshold / norm, norm


def candidate_pool(
    target: TargetFunction, d: int, size: int, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Directions uniform on the l1 unit sphere and thresholds uniform in [0, 1].
    Atoms the target is built from come first.
    """
    magnitudes = rng.exponential(size=(size, d))
    signs = rng.choice([-1.0, 1.0], size=(size, d))
    directions = signs * magnitudes / np.sum(magnitudes, axis=1, keepdims=True)
    thresholds = rng.uniform(0.0, 1.0, size=size)

    hinted = [normalize_atom(np.asarray(a, dtype=np.float64), t)[:2] for a, t in target.ridge_atoms()]

    if hinted:
        directions = np.vstack([np.vstack([a for a, _ in hinted]), directions])
        thresholds = np.concatenate([[t for _, t in hinted], thresholds])

    return directions, np.clip(thresholds, 0.0, 1.0)


def ramp_features(points: np.ndarray, directions: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    return np.maximum(points @ directions.T - thresholds, 0.0)


def training_points(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    sample = qmc.LatinHypercube(d=d, seed=rng).random(count)
    return qmc.scale(sample, -np.ones(d), np.ones(d))


def _least_squares(features: np.ndarray, residual: np.ndarray) -> np.ndarray:
    coeffs, *_ = linalg.lstsq(features, residual)
    return coeffs


def _greedy_selection(features: np.ndarray, residual: np.ndarray, m: int) -> Tuple[List[int], np.ndarray]:
    norms = np.linalg.norm(features, axis=0)
    usable = norms > 0
    selected: List[int] = []
    coeffs = np.zeros(0)
    current = residual

    for _ in range(m):
        scores = np.zeros_like(norms)
        scores[usable] = np.abs(features[:, usable].T @ current) / norms[usable]
        scores[selected] = -1.0
        best = int(np.argmax(scores))

        if scores[best] <= 0:
            break

        selected.append(best)
        coeffs = _least_squares(features[:, selected], residual)
        current = residual - features[:, selected] @ coeffs

    return selected, coeffs


def fit_ridge(
    target: TargetFunction,
    d: int,
    m: int,
    seed: int,
    *,
    strategy: FitStrategy = FitStrategy.GREEDY,
    gradient_step: Optional[float] = None,
    pool_size: Optional[int] = None,
    sample_count: int = TRAINING_POINTS,
) -> RidgeExpansion:
    """
    Ramp-ridge expansion with m terms approximating the target on [-1, 1]^d.

    beta0 = target(0) and alpha0 is the central-difference gradient at 0; the remaining residual is
    fitted by least squares over ramp atoms drawn from a pool seeded with `seed`. Coefficients gamma_k
    of the unit-direction atoms are folded into v = m max|gamma| and beta_k = m gamma_k / v.
    """
    if m < 0:
        raise InvalidRidgeExpansion(f"m must be nonnegative, got {m}", {"m": m})

    if target.d != d:
        raise DimensionMismatch(f"Target is defined on d={target.d}, requested d={d}", {"d": d})

    settings = get_settings()
    gradient_step = gradient_step or settings.gradient_step
    pool_size = pool_size or settings.candidate_pool

    with log_execution_time("fit_ridge", logger, target=target.name, d=d, m=m, strategy=strategy.value):
        beta0 = float(target(np.zeros((1, d)))[0])
        alpha0 = central_gradient(target, d, gradient_step)

        if m == 0:
            return RidgeExpansion(beta0=beta0, alpha0=alpha0)

        pool_rng, sample_rng = (np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(2))
        directions, thresholds = candidate_pool(target, d, max(pool_size, m), pool_rng)

        points = training_points(d, sample_count, sample_rng)
        residual = target(points) - beta0 - points @ alpha0
        features = ramp_features(points, directions, thresholds)

        if strategy == FitStrategy.GREEDY:
            selected, gamma = _greedy_selection(features, residual, m)
        else:
            selected = list(range(m))
            gamma = _least_squares(features[:, selected], residual)

        # pad when the pool ran out of informative atoms, unused terms carry beta = 0
        unused = [index for index in range(len(thresholds)) if index not in selected]
        selected = selected + unused[: m - len(selected)]
        gamma = np.concatenate([gamma, np.zeros(m - len(gamma))])

        scale = float(np.max(np.abs(gamma)))
        v = m * scale
        betas = np.clip(gamma * m / v, -1.0, 1.0) if v > 0 else np.zeros(m)

        terms = tuple(
            RidgeTerm(beta=float(beta), alpha=directions[index], t=float(thresholds[index]))
            for beta, index in zip(betas, selected)
        )
        ridge = RidgeExpansion(beta0=beta0, alpha0=alpha0, v=v, terms=terms)

        training_error = float(np.max(np.abs(ridge(points) - target(points))))
        logger.debug(f"fit_ridge training sup error {training_error:.3e} with v={v:.3e}")

    return ridge
