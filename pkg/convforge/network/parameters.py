from math import ceil

from pydantic import Field

from convforge.exceptions import InvalidFilterLength, UnstructuredBias
from convforge.network.config import NetworkConfig
from convforge.network.model import DeepCnn
from convforge.utils.pydantic_types import FrozenModel


def count_free_parameters(net: DeepCnn) -> int:
    """
    Enumerates the free parameters layer by layer.

    A layer j < J contributes its s+1 mask taps and the 2s+1 distinct bias values
    (s leading, the repeated middle, s trailing); layer J contributes s+1 taps and its d_J bias
    entries; the output adds d_J coefficients.
    :raises UnstructuredBias: a hidden bias does not repeat its middle value
    """
    s, J = net.config.s, net.config.J
    total = 0

    for j, layer in enumerate(net.layers, start=1):
        total += s + 1

        if j < J:
            if not layer.bias.has_repeated_middle(s):
                raise UnstructuredBias(f"Bias of layer {j} does not repeat its middle entries", {"layer": j})
            total += s + 1 + s
        else:
            total += len(layer.bias.entries)

    return total + len(net.output_coeffs)


def parameter_formula(s: int, d: int, J: int) -> int:
    return (5 * s + 2) * J + 2 * d - 2 * s - 1


def fully_connected_parameters(config: NetworkConfig) -> int:
    """
    Parameters of a fully connected net with the same widths: sum d_j d_{j-1} weights, sum d_j biases, d_J outputs
    """
    widths = config.widths
    weights = sum(widths[j] * widths[j - 1] for j in range(1, len(widths)))

    return weights + sum(widths[1:]) + widths[-1]


class ScalingPreset(FrozenModel):
    d: int = Field(..., ge=2)
    tau: float = Field(..., ge=0.0, le=1.0)
    L: int = Field(..., ge=1)
    s: int
    J: int
    max_width: int
    width_bound: int
    parameter_count: int
    parameter_bound: int


def scaling_preset(d: int, tau: float, L: int) -> ScalingPreset:
    """
    s = ceil(1 + d^tau / 2), J = ceil(4 d^(1-tau)) L, with widths bounded by 12 L d and
    parameters by (73 L + 2) d
    """
    # guards against d**tau landing a rounding error above an integer
    s = ceil(1 + d**tau / 2 - 1e-12)
    J = ceil(4 * d ** (1 - tau) - 1e-12) * L

    if s > d:
        raise InvalidFilterLength(f"Preset filter length s={s} exceeds d={d}", {"s": s, "d": d})

    return ScalingPreset(
        d=d,
        tau=tau,
        L=L,
        s=s,
        J=J,
        max_width=d + J * s,
        width_bound=12 * L * d,
        parameter_count=parameter_formula(s, d, J),
        parameter_bound=(73 * L + 2) * d,
    )
