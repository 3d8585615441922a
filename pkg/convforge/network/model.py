from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from pydantic import PrivateAttr, model_validator

from convforge.exceptions import DimensionMismatch
from convforge.network.config import NetworkConfig
from convforge.network.layers import Layer
from convforge.signal.matrices import toeplitz
from convforge.signal.sequences import l1_norm
from convforge.utils.pydantic_types import FloatVector, FrozenModel


class DeepCnn(FrozenModel):
    """
    h^(0)(x) = x, h^(j)(x) = relu(T^(j) h^(j-1)(x) - b^(j)), output = sum_k c_k h^(J)_k(x)
    """

    config: NetworkConfig
    layers: Tuple[Layer, ...]
    output_coeffs: FloatVector
    bound_ledger: FloatVector

    _matrices: Optional[List[np.ndarray]] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def check_structure(self) -> "DeepCnn":
        config = self.config

        if len(self.layers) != config.J:
            raise ValueError(f"Expected {config.J} layers, got {len(self.layers)}")

        for j, layer in enumerate(self.layers, start=1):
            if layer.mask.degree > config.s:
                raise ValueError(f"Layer {j} mask degree {layer.mask.degree} exceeds s={config.s}")

            if len(layer.bias.entries) != config.widths[j]:
                raise ValueError(f"Layer {j} bias has length {len(layer.bias.entries)}, expected {config.widths[j]}")

        if len(self.output_coeffs) != config.output_width:
            raise ValueError(f"output_coeffs must have length d_J={config.output_width}")

        if len(self.bound_ledger) != config.J + 1:
            raise ValueError(f"bound_ledger must hold B^(0..J), {config.J + 1} values")

        for j, layer in enumerate(self.layers, start=1):
            expected = l1_norm(layer.mask) * self.bound_ledger[j - 1]
            if abs(self.bound_ledger[j] - expected) > 1e-12 * max(1.0, abs(expected)):
                raise ValueError(f"B^({j}) must equal ||w^({j})||_1 B^({j - 1})")

        return self

    @property
    def matrices(self) -> List[np.ndarray]:
        if self._matrices is None:
            widths = self.config.widths
            self._matrices = [
                toeplitz(layer.mask, widths[j], self.config.s).entries for j, layer in enumerate(self.layers)
            ]

        return self._matrices

    @property
    def top_bound(self) -> float:
        return float(self.bound_ledger[-1])


def forward(net: DeepCnn, x: np.ndarray) -> Tuple[List[np.ndarray], float]:
    """
    All activations h^(0..J)(x) and the scalar output for a single input
    """
    h = np.asarray(x, dtype=np.float64)

    if h.shape != (net.config.d,):
        raise DimensionMismatch(f"Input must have shape ({net.config.d},), got {h.shape}")

    activations = [h]

    for matrix, layer in zip(net.matrices, net.layers, strict=True):
        h = np.maximum(matrix @ h - layer.bias.entries, 0.0)
        activations.append(h)

    return activations, float(net.output_coeffs @ h)


def _evaluate_chunk(net: DeepCnn, points: np.ndarray) -> np.ndarray:
    H = points

    for matrix, layer in zip(net.matrices, net.layers, strict=True):
        H = np.maximum(H @ matrix.T - layer.bias.entries, 0.0)

    return H @ net.output_coeffs


def evaluate_batch(net: DeepCnn, points: np.ndarray, threads: int = 1) -> np.ndarray:
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))

    if X.shape[1] != net.config.d:
        raise DimensionMismatch(f"Points have dimension {X.shape[1]}, expected d={net.config.d}")

    if threads <= 1 or len(X) < 2 * threads:
        return _evaluate_chunk(net, X)

    chunks = np.array_split(X, threads)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        results = list(executor.map(lambda chunk: _evaluate_chunk(net, chunk), chunks))

    return np.concatenate(results)
