from typing import Iterable, Optional, Sequence

import numpy as np
from pydantic import Field, model_validator

from convforge.exceptions import DimensionMismatch
from convforge.utils.pydantic_types import FloatVector, FrozenModel


class FiniteSequence(FrozenModel):
    """
    Real sequence supported on {0, ..., support_hint}; coeffs[k] is the entry at position k.
    Filter masks, the stacked sequence W and convolution results are all FiniteSequence instances.
    """

    coeffs: FloatVector
    support_hint: int = Field(..., ge=0)

    @model_validator(mode="after")
    def check_support(self) -> "FiniteSequence":
        if len(self.coeffs) != self.support_hint + 1:
            raise ValueError(
                f"coeffs must have support_hint + 1 = {self.support_hint + 1} entries, got {len(self.coeffs)}"
            )

        return self

    @classmethod
    def from_coeffs(cls, values: Iterable[float], support_hint: Optional[int] = None) -> "FiniteSequence":
        array = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.float64)

        if array.size == 0:
            array = np.zeros(1)

        if support_hint is None:
            support_hint = array.size - 1

        if array.size > support_hint + 1:
            if np.any(array[support_hint + 1 :] != 0):
                raise DimensionMismatch(
                    f"Sequence has nonzero entries beyond declared support {support_hint}",
                    {"support_hint": support_hint, "length": int(array.size)},
                )
            array = array[: support_hint + 1]
        else:
            array = np.pad(array, (0, support_hint + 1 - array.size))

        return cls(coeffs=array, support_hint=support_hint)

    @property
    def degree(self) -> int:
        """
        Effective degree: largest index holding a nonzero entry, -1 for the zero sequence
        """
        nonzero = np.flatnonzero(self.coeffs)
        return int(nonzero[-1]) if nonzero.size else -1

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    def __getitem__(self, index: int) -> float:
        if 0 <= index <= self.support_hint:
            return float(self.coeffs[index])

        return 0.0

    def trimmed(self) -> "FiniteSequence":
        return self.with_support(max(self.degree, 0))

    def with_support(self, support_hint: int) -> "FiniteSequence":
        return FiniteSequence.from_coeffs(self.coeffs, support_hint=support_hint)

    def reversed_support(self) -> "FiniteSequence":
        """
        k -> W_{support_hint - k}
        """
        return FiniteSequence(coeffs=self.coeffs[::-1], support_hint=self.support_hint)

    def to_list(self) -> list:
        return self.coeffs.tolist()


def delta(support_hint: int = 0) -> FiniteSequence:
    return FiniteSequence.from_coeffs([1.0], support_hint=support_hint)


def convolve(a: FiniteSequence, b: FiniteSequence) -> FiniteSequence:
    """
    (a*b)_i = sum_k a_{i-k} b_k, supported on {0, ..., a.support_hint + b.support_hint}
    """
    return FiniteSequence(coeffs=np.convolve(a.coeffs, b.coeffs), support_hint=a.support_hint + b.support_hint)


def fold_convolve(masks: Sequence[FiniteSequence]) -> FiniteSequence:
    """
    W = w^(J) * ... * w^(2) * w^(1) for masks = [w^(1), ..., w^(J)]; the empty product is the delta sequence
    """
    result = delta()

    for mask in masks:
        result = convolve(mask, result)

    return result


def l1_norm(mask: FiniteSequence) -> float:
    return float(np.sum(np.abs(mask.coeffs)))
