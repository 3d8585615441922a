from .config import NetworkConfig, minimal_depth
from .construction import build_network, realize_output_coeffs, stack_ridge_directions
from .layers import BiasVector, Layer, bound_ledger, build_biases
from .model import DeepCnn, evaluate_batch, forward
from .parameters import (
    ScalingPreset,
    count_free_parameters,
    fully_connected_parameters,
    parameter_formula,
    scaling_preset,
)
from .ridge import RidgeExpansion, RidgeTerm

__all__ = [
    "BiasVector",
    "DeepCnn",
    "Layer",
    "NetworkConfig",
    "RidgeExpansion",
    "RidgeTerm",
    "ScalingPreset",
    "bound_ledger",
    "build_biases",
    "build_network",
    "count_free_parameters",
    "evaluate_batch",
    "forward",
    "fully_connected_parameters",
    "minimal_depth",
    "parameter_formula",
    "realize_output_coeffs",
    "scaling_preset",
    "stack_ridge_directions",
]
