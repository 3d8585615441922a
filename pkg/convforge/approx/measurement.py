from typing import Callable, Optional, Union

import numpy as np
from pydantic import Field, model_validator
from scipy.stats import qmc

from convforge.network.model import DeepCnn, evaluate_batch
from convforge.utils.enums import StrChoicesEnum
from convforge.utils.pydantic_types import FrozenModel

Evaluable = Union[Callable[[np.ndarray], np.ndarray], DeepCnn]


class GridKind(StrChoicesEnum):
    TENSOR = "tensor"
    LATIN_HYPERCUBE = "lhs"


class GridSpec(FrozenModel):
    """
    Evaluation points inside [-1, 1]^d: a tensor grid with `points_per_axis` nodes per axis,
    or `sample_count` Latin-hypercube points drawn with `seed`
    """

    kind: GridKind = GridKind.LATIN_HYPERCUBE
    points_per_axis: Optional[int] = Field(None, ge=2)
    sample_count: Optional[int] = Field(None, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_size(self) -> "GridSpec":
        if self.kind == GridKind.TENSOR and self.points_per_axis is None:
            raise ValueError("A tensor grid needs points_per_axis")

        if self.kind == GridKind.LATIN_HYPERCUBE and self.sample_count is None:
            raise ValueError("A Latin-hypercube grid needs sample_count")

        return self

    @classmethod
    def latin_hypercube(cls, sample_count: int, seed: int = 0) -> "GridSpec":
        return cls(kind=GridKind.LATIN_HYPERCUBE, sample_count=sample_count, seed=seed)

    @classmethod
    def tensor(cls, points_per_axis: int) -> "GridSpec":
        return cls(kind=GridKind.TENSOR, points_per_axis=points_per_axis)


def sample_points(grid_spec: GridSpec, d: int) -> np.ndarray:
    if grid_spec.kind == GridKind.TENSOR:
        axis = np.linspace(-1.0, 1.0, grid_spec.points_per_axis)
        mesh = np.meshgrid(*([axis] * d), indexing="ij")
        return np.stack([coordinate.ravel() for coordinate in mesh], axis=1)

    sample = qmc.LatinHypercube(d=d, seed=grid_spec.seed).random(grid_spec.sample_count)
    return qmc.scale(sample, -np.ones(d), np.ones(d))


def _values(function: Evaluable, points: np.ndarray, threads: int) -> np.ndarray:
    if isinstance(function, DeepCnn):
        return evaluate_batch(function, points, threads=threads)

    return np.asarray(function(points), dtype=np.float64)


def sup_error(f: Evaluable, g: Evaluable, grid_spec: GridSpec, d: int, threads: int = 1) -> float:
    """
    max over the grid of |f(x) - g(x)|; either side may be a target, a ridge expansion or a DeepCnn
    """
    points = sample_points(grid_spec, d)
    return float(np.max(np.abs(_values(f, points, threads) - _values(g, points, threads))))


class ErrorReport(FrozenModel):
    sup_error: float = Field(..., ge=0)
    grid_spec: GridSpec
    J: int = Field(..., ge=1)
    param_count: int = Field(..., ge=0)
    m: int = Field(..., ge=0)
    s: int = Field(..., ge=2)
    d: int = Field(..., ge=1)
    width: int
    fit_error: float = Field(..., ge=0)
    realization_error: float = Field(..., ge=0)
    theoretical_rate: float

    def csv_row(self) -> dict:
        row = self.model_dump(mode="json", exclude={"grid_spec"})
        row["grid"] = self.grid_spec.kind.value
        row["grid_size"] = self.grid_spec.sample_count or self.grid_spec.points_per_axis
        return row
