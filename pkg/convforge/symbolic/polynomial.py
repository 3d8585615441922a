from typing import Optional, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from convforge.signal.sequences import FiniteSequence
from convforge.utils.pydantic_types import FloatVector, FrozenModel


class RealPolynomial(FrozenModel):
    """
    p(z) = sum_k coeffs[k] z^k, the same layout as FiniteSequence
    """

    coeffs: FloatVector

    @property
    def degree(self) -> int:
        nonzero = np.flatnonzero(self.coeffs)
        return int(nonzero[-1]) if nonzero.size else -1

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    @property
    def leading(self) -> float:
        return float(self.coeffs[self.degree]) if not self.is_zero else 0.0

    def trimmed_coeffs(self) -> np.ndarray:
        return np.array(self.coeffs[: max(self.degree, 0) + 1])

    def monic(self) -> "RealPolynomial":
        return RealPolynomial(coeffs=self.trimmed_coeffs() / self.leading)

    def __call__(self, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        return npoly.polyval(z, self.coeffs)

    def __mul__(self, other: "RealPolynomial") -> "RealPolynomial":
        return RealPolynomial(coeffs=npoly.polymul(self.coeffs, other.coeffs))


def symbol_of(seq: FiniteSequence) -> RealPolynomial:
    return RealPolynomial(coeffs=seq.coeffs)


def sequence_of(poly: RealPolynomial, support_hint: Optional[int] = None) -> FiniteSequence:
    return FiniteSequence.from_coeffs(poly.trimmed_coeffs(), support_hint=support_hint)
