from typing import Annotated, Any, List

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, WithJsonSchema


def _frozen_array(value: Any, ndim: int) -> np.ndarray:
    array = np.array(value, dtype=np.float64)

    if array.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-dimensional array, got shape {array.shape}")

    if not np.all(np.isfinite(array)):
        raise ValueError("Array entries must be finite")

    array.setflags(write=False)
    return array


def _to_list(value: np.ndarray) -> List:
    return value.tolist()


FloatVector = Annotated[
    np.ndarray,
    BeforeValidator(lambda v: _frozen_array(v, 1)),
    PlainSerializer(_to_list, return_type=list),
    WithJsonSchema({"type": "array", "items": {"type": "number"}}),
]

FloatMatrix = Annotated[
    np.ndarray,
    BeforeValidator(lambda v: _frozen_array(v, 2)),
    PlainSerializer(_to_list, return_type=list),
    WithJsonSchema({"type": "array", "items": {"type": "array", "items": {"type": "number"}}}),
]


class FrozenModel(BaseModel):
    # arrays are checked by isinstance after the BeforeValidator converted them
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")
