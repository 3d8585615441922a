import logging
from typing import Optional

import numpy as np

from convforge.exceptions import DegenerateScale, DepthTooSmall, InvalidFilterLength
from convforge.network.config import NetworkConfig, minimal_depth
from convforge.network.layers import Layer, bound_ledger, build_biases
from convforge.network.model import DeepCnn
from convforge.network.ridge import RidgeExpansion
from convforge.signal.sequences import FiniteSequence
from convforge.symbolic.factorization import factorize_mask, pad_with_deltas
from convforge.symbolic.roots import RootFindingMethod
from convforge.utils.context_managers import log_execution_time

logger = logging.getLogger(__name__)


def stack_ridge_directions(ridge: RidgeExpansion) -> FiniteSequence:
    """
    W supported in {0, ..., (m+1)d - 1} with [W_{(m+1)d-1} ... W_1 W_0] = [alpha_m^T ... alpha_1^T alpha_0^T].

    Row (k+1)d (one-based) of big_toeplitz(W, d, .) is then alpha_k^T.
    """
    ridge.check_dimensions()
    stacked = np.concatenate([ridge.alpha0[::-1], *[term.alpha[::-1] for term in ridge.terms]])

    return FiniteSequence(coeffs=stacked, support_hint=(ridge.m + 1) * ridge.d - 1)


def _output_coeffs(config: NetworkConfig, ridge: RidgeExpansion, top_bound: float) -> np.ndarray:
    if top_bound == 0:
        raise DegenerateScale("B^(J) is zero, the mask chain annihilates every input")

    d = config.d
    coeffs = np.zeros(config.output_width)
    coeffs[d - 1] = 1.0

    for k, term in enumerate(ridge.terms, start=1):
        coeffs[(k + 1) * d - 1] = ridge.v * term.beta / ridge.m

    # the constant channel h^(J)_{d+Js} = B^(J) carries beta0 and cancels the +B^(J) of channel d
    coeffs[-1] = ridge.beta0 / top_bound - 1.0

    return coeffs


def realize_output_coeffs(net: DeepCnn, ridge: RidgeExpansion) -> np.ndarray:
    """
    c with sum_k c_k h^(J)_k(x) = F_m(x) on the domain
    """
    return _output_coeffs(net.config, ridge, net.top_bound)


def build_network(
    ridge: RidgeExpansion,
    s: int,
    J: int,
    domain_bound: float = 1.0,
    *,
    tol: Optional[float] = None,
    method: RootFindingMethod = RootFindingMethod.ABERTH,
) -> DeepCnn:
    """
    Deep CNN of depth J realising the ridge expansion exactly on {x : max_k |x_k| <= domain_bound}.

    Pipeline: stack the ridge directions into W, factorize W into masks of length s+1, pad with
    delta masks up to J, derive the biases from the B^(j) ledger, then the output coefficients.
    :raises InvalidFilterLength: s outside [2, d]
    :raises DepthTooSmall: J(s-1) < (m+1)d
    :raises DegenerateScale: every direction vanishes, so B^(J) would be zero
    """
    ridge.check_dimensions()
    d, m = ridge.d, ridge.m

    if not 2 <= s <= d:
        raise InvalidFilterLength(f"s must satisfy 2 ≤ s ≤ d={d}, got {s}", {"s": s, "d": d})

    if J < (required := minimal_depth(d, s, m)):
        raise DepthTooSmall(J, required)

    config = NetworkConfig(d=d, s=s, J=J)

    with log_execution_time("Network construction", logger, d=d, s=s, J=J, m=m):
        stacked = stack_ridge_directions(ridge)

        if stacked.is_zero:
            raise DegenerateScale("B^(J) is zero, the stacked ridge directions vanish", {"d": d, "m": m})

        factorization = factorize_mask(stacked, s, tol, method=method)
        masks = pad_with_deltas(factorization.masks, J)
        masks = [mask.with_support(s) for mask in masks]
        ledger = bound_ledger(masks, domain_bound)
        biases = build_biases(masks, ridge, domain_bound, config)

        net = DeepCnn(
            config=config,
            layers=tuple(Layer(mask=mask, bias=bias) for mask, bias in zip(masks, biases, strict=True)),
            output_coeffs=_output_coeffs(config, ridge, ledger[-1]),
            bound_ledger=ledger,
        )

    logger.debug(f"Built network with {factorization.J} factor masks padded to J={J}, B^(J)={ledger[-1]:.6e}")

    return net
