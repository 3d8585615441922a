from typing import Any, ClassVar, Dict, List, Optional, Tuple, Type

import numpy as np
from pydantic import Field, model_validator

from convforge.exceptions import DimensionMismatch, UnknownTarget
from convforge.utils.pydantic_types import FloatVector, FrozenModel


def _all_subclasses(klass: Type) -> List[Type]:
    subclasses = []

    for subclass in klass.__subclasses__():
        subclasses.append(subclass)
        subclasses.extend(_all_subclasses(subclass))

    return subclasses


def _or_default(value: Optional[np.ndarray], default: np.ndarray) -> np.ndarray:
    return default if value is None else value


class TargetFunction(FrozenModel):
    """
    Deterministic smooth function on [-1, 1]^d, evaluated row-wise on an (n, d) array
    """

    name: ClassVar[str]

    d: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_vector_params(self) -> "TargetFunction":
        for field_name, value in self:
            if isinstance(value, np.ndarray) and len(value) != self.d:
                raise ValueError(f"{field_name} has length {len(value)}, expected d={self.d}")

        return self

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    def __call__(self, points: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(points, dtype=np.float64))

        if X.shape[1] != self.d:
            raise DimensionMismatch(f"Points have dimension {X.shape[1]}, expected d={self.d}")

        return self.evaluate(X)

    def ridge_atoms(self) -> List[Tuple[np.ndarray, float]]:
        """
        Ramp directions and thresholds the function is built from, if it is a ramp-ridge sum
        """
        return []

    @property
    def descriptor(self) -> Dict[str, Any]:
        return {"name": self.name, **self.model_dump(mode="json")}

    @classmethod
    def names(cls) -> List[str]:
        return sorted(klass.name for klass in _all_subclasses(cls))

    @classmethod
    def get_class_by_name(cls, name: str) -> Type["TargetFunction"]:
        for klass in _all_subclasses(cls):
            if klass.name == name:
                return klass

        supported = ",".join(cls.names())
        raise UnknownTarget(f"Unknown target '{name}'. Supported targets are: {supported}", {"target": name})

    @classmethod
    def create(cls, name: str, d: int, **params: Any) -> "TargetFunction":
        return cls.get_class_by_name(name)(d=d, **params)


class GaussianBump(TargetFunction):
    """
    exp(-|x - center|^2 / (2 width^2))
    """

    name: ClassVar[str] = "gaussian"

    width: float = Field(1.0, gt=0)
    center: Optional[FloatVector] = None

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        center = _or_default(self.center, np.zeros(self.d))
        return np.exp(-np.sum((points - center) ** 2, axis=1) / (2.0 * self.width**2))


class Quadratic(TargetFunction):
    """
    scale * |x|^2 / 2
    """

    name: ClassVar[str] = "quadratic"

    scale: float = 1.0

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return 0.5 * self.scale * np.sum(points**2, axis=1)


class CosineRidge(TargetFunction):
    """
    cos(frequency * direction . x + phase)
    """

    name: ClassVar[str] = "cosine-ridge"

    frequency: float = 2.0
    phase: float = 0.0
    direction: Optional[FloatVector] = None

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        direction = _or_default(self.direction, np.ones(self.d) / self.d)
        return np.cos(self.frequency * (points @ direction) + self.phase)


class Linear(TargetFunction):
    name: ClassVar[str] = "linear"

    slope: Optional[FloatVector] = None
    intercept: float = 0.0

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return points @ _or_default(self.slope, np.ones(self.d)) + self.intercept


class Ramp(TargetFunction):
    """
    (direction . x - threshold)_+ + slope . x + intercept, a member of the ramp-ridge class
    """

    name: ClassVar[str] = "ramp"

    direction: Optional[FloatVector] = None
    threshold: float = Field(0.25, ge=0)
    slope: Optional[FloatVector] = None
    intercept: float = 0.0

    def _direction(self) -> np.ndarray:
        return _or_default(self.direction, np.ones(self.d) / self.d)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        ramp = np.maximum(points @ self._direction() - self.threshold, 0.0)
        return ramp + points @ _or_default(self.slope, np.zeros(self.d)) + self.intercept

    def ridge_atoms(self) -> List[Tuple[np.ndarray, float]]:
        return [(self._direction(), self.threshold)]
