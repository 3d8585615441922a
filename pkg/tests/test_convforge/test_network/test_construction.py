import numpy as np
import pytest

from convforge.approx.measurement import GridSpec, sample_points
from convforge.exceptions import DegenerateScale, DepthTooSmall, InvalidFilterLength
from convforge.network.config import NetworkConfig, minimal_depth
from convforge.network.construction import build_network, realize_output_coeffs, stack_ridge_directions
from convforge.network.layers import bound_ledger, build_biases
from convforge.network.model import DeepCnn, evaluate_batch, forward
from convforge.network.ridge import RidgeExpansion, RidgeTerm
from convforge.signal.matrices import big_toeplitz, matrix_chain_product
from convforge.signal.sequences import FiniteSequence, delta
from convforge.testing.helpers import assert_close_scaled, random_masks, random_ridge, uniform_points
from convforge.utils.numeric import max_abs_difference, scale_of

# (d, m, s, extra depth above the minimal one)
REALIZATION_CASES = [
    (2, 3, 2, 0),
    (2, 5, 2, 2),
    (3, 2, 2, 1),
    (3, 4, 3, 0),
    (4, 6, 4, 1),
    (4, 2, 3, 3),
    (4, 10, 4, 0),
    (8, 3, 8, 1),
    (8, 1, 6, 0),
    (2, 0, 2, 1),
    (8, 10, 8, 0),
    (8, 9, 8, 1),
]

# short filters hold few conjugate pairs each, so B^(J) stays large for every grouping
BIAS_SCALE_CASES = [
    (4, 10, 3, 0),
    (8, 10, 4, 0),
    (8, 10, 6, 0),
]


class TestStackRidgeDirections:
    def test_two_dimensional(self) -> None:
        a01, a02, a11, a12 = 0.3, -1.2, 0.25, -0.75
        term = RidgeTerm(beta=1.0, alpha=[a11, a12], t=0.5)
        ridge = RidgeExpansion(beta0=0.0, alpha0=[a01, a02], v=1.0, terms=(term,))
        W = stack_ridge_directions(ridge)

        assert W.to_list() == [a02, a01, a12, a11]
        assert W.support_hint == 3

    def test_single_vector(self) -> None:
        W = stack_ridge_directions(RidgeExpansion(beta0=0.0, alpha0=[1.0, 0.0, 0.0]))

        assert W.to_list() == [0.0, 0.0, 1.0]

    def test_rows_of_big_toeplitz(self, rng: np.random.Generator) -> None:
        ridge = random_ridge(rng, 3, 4)
        T = big_toeplitz(stack_ridge_directions(ridge), 3, 3 + 8 * 2)
        directions = [ridge.alpha0] + [term.alpha for term in ridge.terms]

        for k, alpha in enumerate(directions):
            assert np.max(np.abs(T[(k + 1) * 3 - 1] - alpha)) <= 1e-14


class TestBuildBiases:
    def test_delta_masks(self) -> None:
        config = NetworkConfig(d=2, s=2, J=3)
        masks = [delta(2)] * 3
        biases = build_biases(masks, RidgeExpansion(beta0=0.0, alpha0=[1.0, 1.0]), 1.0, config)

        assert bound_ledger(masks, 1.0) == [1.0, 1.0, 1.0, 1.0]
        assert biases[0].entries.tolist() == [-1.0] * 4

    def test_single_layer(self) -> None:
        config = NetworkConfig(d=2, s=2, J=1)
        biases = build_biases([delta(2)], RidgeExpansion(beta0=0.0, alpha0=[1.0, 1.0]), 1.0, config)

        assert len(biases) == 1
        assert not biases[0].structured
        # component d and d+Js take -B^(J), the rest +B^(J)
        assert biases[0].entries.tolist() == [1.0, -1.0, 1.0, -1.0]

    def test_repeated_middle(self, rng: np.random.Generator) -> None:
        for s in (2, 3, 4):
            config = NetworkConfig(d=6, s=s, J=6)
            biases = build_biases(random_masks(rng, s, 6), random_ridge(rng, 6, 1), 1.0, config)

            for bias in biases[:-1]:
                assert bias.structured
                assert bias.has_repeated_middle(s)

    def test_mask_count(self) -> None:
        with pytest.raises(ValueError):
            build_biases([delta(2)], RidgeExpansion(beta0=0.0, alpha0=[1.0, 1.0]), 1.0, NetworkConfig(d=2, s=2, J=2))

    def test_constant_channel_needs_depth(self, rng: np.random.Generator) -> None:
        # Js = 10 < (m+1)d = 12, so W_{Js} would not vanish
        config = NetworkConfig(d=4, s=2, J=5)

        with pytest.raises(DepthTooSmall) as exc_info:
            build_biases(random_masks(rng, 2, 5), random_ridge(rng, 4, 2), 1.0, config)

        assert exc_info.value.minimal_depth == 6

    def test_exact_depth_accepted(self, rng: np.random.Generator) -> None:
        config = NetworkConfig(d=4, s=2, J=6)
        biases = build_biases(random_masks(rng, 2, 6), random_ridge(rng, 4, 2), 1.0, config)

        assert [bias.entries.size for bias in biases] == config.widths[1:]


class TestBuildNetwork:
    @pytest.mark.parametrize("d, s, m, minimal", [(2, 2, 1, 4), (4, 3, 1, 4)])
    def test_depth_too_small(self, rng: np.random.Generator, d: int, s: int, m: int, minimal: int) -> None:
        with pytest.raises(DepthTooSmall) as exc_info:
            build_network(random_ridge(rng, d, m), s, minimal - 1)

        assert exc_info.value.minimal_depth == minimal
        assert exc_info.value.details["minimal_depth"] == minimal

    def test_minimal_depth_builds(self, rng: np.random.Generator) -> None:
        net = build_network(random_ridge(rng, 2, 1), 2, 4)

        assert net.config.J == minimal_depth(2, 2, 1) == 4

    @pytest.mark.parametrize("s", [1, 4])
    def test_filter_length(self, rng: np.random.Generator, s: int) -> None:
        with pytest.raises(InvalidFilterLength):
            build_network(random_ridge(rng, 3, 1), s, 10)

    def test_zero_chain(self) -> None:
        ridge = RidgeExpansion(beta0=1.0, alpha0=[0.0, 0.0])

        with pytest.raises(DegenerateScale) as exc_info:
            build_network(ridge, 2, 2)

        assert exc_info.value.to_dict()["error"] == "DegenerateScale"

    def test_vanishing_ridge_terms(self) -> None:
        term = RidgeTerm(beta=0.5, alpha=[0.0, 0.0], t=0.25)
        ridge = RidgeExpansion(beta0=0.0, alpha0=[0.0, 0.0], v=1.0, terms=(term,))

        with pytest.raises(DegenerateScale):
            build_network(ridge, 2, 4)

    @pytest.mark.parametrize("d, m, s, extra", REALIZATION_CASES)
    def test_exact_realization(self, rng: np.random.Generator, d: int, m: int, s: int, extra: int) -> None:
        ridge = random_ridge(rng, d, m)
        net = build_network(ridge, s, minimal_depth(d, s, m) + extra)
        points = uniform_points(rng, 1000, d)

        assert_close_scaled(evaluate_batch(net, points), ridge(points), 1e-8)

    @pytest.mark.parametrize("d, m, s, extra", BIAS_SCALE_CASES)
    def test_realization_at_bias_scale(self, rng: np.random.Generator, d: int, m: int, s: int, extra: int) -> None:
        ridge = random_ridge(rng, d, m)
        net = build_network(ridge, s, minimal_depth(d, s, m) + extra)
        points = uniform_points(rng, 1000, d)
        expected = ridge(points)
        # channel d carries alpha0 . x + B^(J), so float64 resolves the output only to about eps B^(J)
        floor = net.config.J * net.config.output_width * np.finfo(np.float64).eps * net.top_bound

        assert max_abs_difference(evaluate_batch(net, points), expected) <= 1e-8 * scale_of(expected) + floor

    @pytest.mark.parametrize("d, m, s, extra", REALIZATION_CASES)
    def test_layer_closed_form(self, rng: np.random.Generator, d: int, m: int, s: int, extra: int) -> None:
        ridge = random_ridge(rng, d, m)
        net = build_network(ridge, s, minimal_depth(d, s, m) + extra)
        J, ledger = net.config.J, net.bound_ledger
        masks = [layer.mask for layer in net.layers]

        for x in uniform_points(rng, 100, d):
            activations, _ = forward(net, x)

            for j in range(1, J):
                linear = matrix_chain_product(masks[:j], d, s) @ x
                expected = linear + ledger[j]

                assert np.all(np.abs(linear) <= ledger[j] * (1 + 1e-12))
                assert_close_scaled(activations[j], expected, 1e-9)

            last = activations[J]
            pattern = np.zeros(net.config.output_width)
            pattern[d - 1] = ridge.alpha0 @ x + ledger[J]
            pattern[-1] = ledger[J]

            for k, term in enumerate(ridge.terms, start=1):
                pattern[(k + 1) * d - 1] = max(term.alpha @ x - term.t, 0.0)

            assert np.all(last >= 0)
            assert_close_scaled(last, pattern, 1e-9)

    def test_tensor_grid_in_three_dimensions(self, rng: np.random.Generator) -> None:
        ridge = random_ridge(rng, 3, 3)
        net = build_network(ridge, 3, minimal_depth(3, 3, 3))
        points = sample_points(GridSpec.tensor(33), 3)

        assert points.shape == (33**3, 3)
        assert_close_scaled(evaluate_batch(net, points, threads=4), ridge(points), 1e-8)

    def test_larger_domain(self, rng: np.random.Generator) -> None:
        ridge = random_ridge(rng, 3, 2)
        net = build_network(ridge, 3, minimal_depth(3, 3, 2), domain_bound=2.0)
        points = uniform_points(rng, 500, 3, bound=2.0)

        assert net.bound_ledger[0] == 2.0
        assert_close_scaled(evaluate_batch(net, points), ridge(points), 1e-8)


class TestOutputCoeffs:
    def test_zero_beta0_cancels_offset(self, rng: np.random.Generator) -> None:
        ridge = random_ridge(rng, 2, 1).model_copy(update={"beta0": 0.0})
        net = build_network(ridge, 2, 4)
        coeffs = realize_output_coeffs(net, ridge)

        assert coeffs[-1] == -1.0
        assert coeffs[1] == 1.0
        assert coeffs[3] == pytest.approx(ridge.v * ridge.terms[0].beta)

    def test_linear_only(self, rng: np.random.Generator) -> None:
        ridge = RidgeExpansion(beta0=0.7, alpha0=[0.5, -1.5, 2.0])
        net = build_network(ridge, 2, 3)
        points = uniform_points(rng, 100, 3)

        assert_close_scaled(evaluate_batch(net, points), 0.7 + points @ ridge.alpha0, 1e-10)

    def test_degenerate_scale(self) -> None:
        config = NetworkConfig(d=2, s=2, J=2)
        masks = [FiniteSequence.from_coeffs([0.0], support_hint=2)] * 2
        ridge = RidgeExpansion(beta0=0.0, alpha0=[1.0, 0.0])
        biases = build_biases(masks, ridge, 1.0, config)
        net = DeepCnn(
            config=config,
            layers=[{"mask": mask, "bias": bias} for mask, bias in zip(masks, biases)],
            output_coeffs=np.zeros(6),
            bound_ledger=bound_ledger(masks, 1.0),
        )

        with pytest.raises(DegenerateScale):
            realize_output_coeffs(net, ridge)
