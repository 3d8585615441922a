from typing import Sequence

import numpy as np
from pydantic import Field, model_validator
from scipy.linalg import toeplitz as scipy_toeplitz

from convforge.exceptions import ConvForgeValidationError, DimensionMismatch, MaskTooLong
from convforge.signal.sequences import FiniteSequence
from convforge.utils.pydantic_types import FloatMatrix, FrozenModel


class ConvMatrix(FrozenModel):
    mask: FiniteSequence
    s: int = Field(..., ge=0)
    in_dim: int = Field(..., ge=1)
    out_dim: int = Field(..., ge=1)
    entries: FloatMatrix

    @model_validator(mode="after")
    def check_shape(self) -> "ConvMatrix":
        if self.out_dim - self.in_dim != self.s:
            raise ValueError(f"out_dim - in_dim must equal s={self.s}")

        if self.entries.shape != (self.out_dim, self.in_dim):
            raise ValueError(f"entries must have shape {(self.out_dim, self.in_dim)}, got {self.entries.shape}")

        if self.mask.degree > self.s:
            raise ValueError(f"mask degree {self.mask.degree} exceeds s={self.s}")

        return self

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.entries @ np.asarray(vector, dtype=np.float64)


def _lower_toeplitz(coeffs: np.ndarray, rows: int, cols: int) -> np.ndarray:
    column = np.zeros(rows)
    size = min(rows, coeffs.size)
    column[:size] = coeffs[:size]
    row = np.zeros(cols)
    row[0] = column[0]

    entries = scipy_toeplitz(column, row)
    entries.setflags(write=False)
    return entries


def toeplitz(mask: FiniteSequence, in_dim: int, s: int) -> ConvMatrix:
    """
    (in_dim + s) x in_dim matrix [mask_{l-k}] whose action on v is the convolution mask * v
    """
    if mask.degree > s:
        raise MaskTooLong(f"Mask degree {mask.degree} exceeds filter length s={s}", {"degree": mask.degree, "s": s})

    if in_dim < 1:
        raise ConvForgeValidationError(f"in_dim must be positive, got {in_dim}")

    out_dim = in_dim + s
    return ConvMatrix(
        mask=mask,
        s=s,
        in_dim=in_dim,
        out_dim=out_dim,
        entries=_lower_toeplitz(mask.coeffs, out_dim, in_dim),
    )


def big_toeplitz(W: FiniteSequence, d: int, d_J: int) -> np.ndarray:
    """
    The d_J x d matrix T^W = [W_{l-k}], l = 1..d_J, k = 1..d in one-based numbering.

    Stored zero-based: entries[l - 1][k - 1] = W_{l-k}, so row number (k+1)d of the one-based
    convention is entries[(k+1)d - 1]. Entries of W beyond index d_J - 1 never appear.
    """
    if d_J < d:
        raise DimensionMismatch(f"d_J={d_J} must not be smaller than d={d}", {"d": d, "d_J": d_J})

    return _lower_toeplitz(W.coeffs, d_J, d)


def matrix_chain_product(masks: Sequence[FiniteSequence], d: int, s: int) -> np.ndarray:
    """
    T^(J) ... T^(1) with T^(j) of shape d_j x d_{j-1}, d_j = d + j*s
    """
    product = np.eye(d)
    width = d

    for mask in masks:
        product = toeplitz(mask, width, s).entries @ product
        width += s

    product.setflags(write=False)
    return product
