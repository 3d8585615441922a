import logging
from typing import List, Sequence

import numpy as np

from convforge.exceptions import DepthTooSmall, DimensionMismatch
from convforge.network.config import NetworkConfig
from convforge.network.ridge import RidgeExpansion
from convforge.signal.sequences import FiniteSequence, l1_norm
from convforge.utils.numeric import scale_of
from convforge.utils.pydantic_types import FloatVector, FrozenModel

logger = logging.getLogger(__name__)


class BiasVector(FrozenModel):
    entries: FloatVector
    structured: bool = False

    def has_repeated_middle(self, s: int) -> bool:
        """
        Entries s+1 .. d_j-s (one-based) share one value
        """
        middle = self.entries[s : len(self.entries) - s]

        if middle.size <= 1:
            return True

        return bool(np.all(np.abs(middle - middle[0]) <= 1e-12 * scale_of(self.entries)))


class Layer(FrozenModel):
    mask: FiniteSequence
    bias: BiasVector


def bound_ledger(masks: Sequence[FiniteSequence], domain_bound: float) -> List[float]:
    """
    B^(0) = domain_bound and B^(j) = ||w^(j)||_1 ... ||w^(1)||_1 B^(0)
    """
    ledger = [float(domain_bound)]

    for mask in masks:
        ledger.append(l1_norm(mask) * ledger[-1])

    return ledger


def _mask_taps(mask: FiniteSequence, s: int) -> np.ndarray:
    taps = np.zeros(s + 1)
    size = min(s + 1, mask.coeffs.size)
    taps[:size] = mask.coeffs[:size]
    return taps


def _row_sums(mask: FiniteSequence, s: int, in_dim: int) -> np.ndarray:
    """
    T^(j) 1_{d_{j-1}}, i.e. the convolution of the mask with the all-ones vector
    """
    return np.convolve(_mask_taps(mask, s), np.ones(in_dim))


def build_biases(
    masks: Sequence[FiniteSequence], ridge: RidgeExpansion, domain_bound: float, config: NetworkConfig
) -> List[BiasVector]:
    """
    Bias vectors that keep every hidden ReLU in its linear regime and cut the ridge ramps out at layer J.

    b^(1) = -B^(1) 1, b^(j) = B^(j-1) T^(j) 1 - B^(j) 1 for 1 < j < J, and the last layer shifts the
    components d and d+Js by -B^(J), the components (k+1)d by +t_k, and every other one by +B^(J).
    """
    if len(masks) != config.J:
        raise DimensionMismatch(f"Expected {config.J} masks, got {len(masks)}", {"J": config.J, "masks": len(masks)})

    d, s, J = config.d, config.s, config.J
    widths = config.widths

    # the constant channel needs W_{Js} = 0, i.e. Js >= (m+1)d
    if J * s < (ridge.m + 1) * d:
        raise DepthTooSmall(J, -(-((ridge.m + 1) * d) // s))

    ledger = bound_ledger(masks, domain_bound)
    biases: List[BiasVector] = []

    for j in range(1, J):
        if j == 1:
            entries = -ledger[1] * np.ones(widths[1])
        else:
            entries = ledger[j - 1] * _row_sums(masks[j - 1], s, widths[j - 1]) - ledger[j]
            # the middle rows of T^(j) hold the whole mask, so their sums coincide exactly
            entries[s : widths[j] - s] = ledger[j - 1] * float(np.sum(_mask_taps(masks[j - 1], s))) - ledger[j]

        biases.append(BiasVector(entries=entries, structured=True))

    # h^(0) = x carries no constant offset, deeper layers carry B^(J-1)
    offset = ledger[J - 1] if J > 1 else 0.0
    top = ledger[J]
    base = offset * _row_sums(masks[J - 1], s, widths[J - 1])
    entries = base + top
    entries[d - 1] = base[d - 1] - top
    entries[widths[J] - 1] = base[widths[J] - 1] - top

    for k, term in enumerate(ridge.terms, start=1):
        index = (k + 1) * d - 1
        entries[index] = base[index] + term.t

    biases.append(BiasVector(entries=entries, structured=False))
    logger.debug(f"Built {J} bias vectors, B^(J)={top:.6e}")

    return biases
