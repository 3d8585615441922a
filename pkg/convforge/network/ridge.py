from typing import Tuple

import numpy as np
from pydantic import Field, model_validator

from convforge.exceptions import DimensionMismatch
from convforge.utils.pydantic_types import FloatVector, FrozenModel

L1_TOLERANCE = 1e-10


class RidgeTerm(FrozenModel):
    beta: float = Field(..., ge=-1.0, le=1.0)
    alpha: FloatVector
    t: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_direction(self) -> "RidgeTerm":
        norm = float(np.sum(np.abs(self.alpha)))

        if abs(norm - 1.0) > L1_TOLERANCE:
            raise ValueError(f"Ridge direction must have unit l1 norm, got {norm!r}")

        return self


class RidgeExpansion(FrozenModel):
    """
    F_m(x) = beta0 + alpha0 . x + (v/m) sum_k beta_k (alpha_k . x - t_k)_+
    """

    beta0: float
    alpha0: FloatVector
    v: float = 0.0
    terms: Tuple[RidgeTerm, ...] = ()

    @property
    def d(self) -> int:
        return len(self.alpha0)

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def directions(self) -> np.ndarray:
        """
        m x d matrix whose k-th row is alpha_{k+1}
        """
        if not self.terms:
            return np.zeros((0, self.d))

        return np.vstack([term.alpha for term in self.terms])

    @property
    def betas(self) -> np.ndarray:
        return np.array([term.beta for term in self.terms], dtype=np.float64)

    @property
    def thresholds(self) -> np.ndarray:
        return np.array([term.t for term in self.terms], dtype=np.float64)

    def check_dimensions(self) -> None:
        for index, term in enumerate(self.terms, start=1):
            if len(term.alpha) != self.d:
                raise DimensionMismatch(
                    f"alpha_{index} has length {len(term.alpha)}, expected d={self.d}",
                    {"term": index, "length": len(term.alpha), "d": self.d},
                )

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        self.check_dimensions()
        X = np.atleast_2d(np.asarray(points, dtype=np.float64))

        if X.shape[1] != self.d:
            raise DimensionMismatch(f"Points have dimension {X.shape[1]}, expected d={self.d}")

        values = self.beta0 + X @ self.alpha0

        if self.m:
            ramps = np.maximum(X @ self.directions.T - self.thresholds, 0.0)
            values = values + (self.v / self.m) * (ramps @ self.betas)

        return values

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(points)
