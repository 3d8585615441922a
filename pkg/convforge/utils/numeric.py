from typing import Any

import numpy as np


def scale_of(*values: Any) -> float:
    """
    Tolerance scale: max(1, largest absolute entry among the given arrays or scalars)
    """
    largest = 0.0

    for value in values:
        array = np.asarray(value, dtype=np.float64)

        if array.size:
            largest = max(largest, float(np.max(np.abs(array))))

    return max(1.0, largest)


def max_abs_difference(a: Any, b: Any) -> float:
    a_arr, b_arr = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)

    if a_arr.shape != b_arr.shape:
        size = max(a_arr.size, b_arr.size)
        a_arr = np.pad(a_arr.ravel(), (0, size - a_arr.size))
        b_arr = np.pad(b_arr.ravel(), (0, size - b_arr.size))

    if a_arr.size == 0:
        return 0.0

    return float(np.max(np.abs(a_arr - b_arr)))


def relative_error(actual: Any, expected: Any) -> float:
    return max_abs_difference(actual, expected) / scale_of(expected)
