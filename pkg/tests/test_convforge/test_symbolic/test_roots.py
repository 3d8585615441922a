import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from convforge.exceptions import DidNotConverge, ZeroSequence
from convforge.signal.sequences import FiniteSequence, delta
from convforge.symbolic.polynomial import RealPolynomial, sequence_of, symbol_of
from convforge.symbolic.roots import RootFindingMethod, RootMultiset, find_roots
from convforge.testing.helpers import assert_close_scaled


def poly(values: list) -> RealPolynomial:
    return RealPolynomial(coeffs=values)


class TestSymbol:
    def test_coefficient_view(self) -> None:
        p = symbol_of(FiniteSequence.from_coeffs([1.0, 2.0, 1.0]))

        assert p.coeffs.tolist() == [1.0, 2.0, 1.0]
        assert p(1.0) == 4.0

    def test_delta_is_constant_one(self) -> None:
        p = symbol_of(delta())

        assert p.degree == 0
        assert p.leading == 1.0

    def test_zero(self) -> None:
        assert symbol_of(FiniteSequence.from_coeffs([0.0, 0.0])).is_zero

    def test_sequence_of_keeps_support(self) -> None:
        assert sequence_of(poly([1.0, 2.0, 0.0]), support_hint=3).to_list() == [1.0, 2.0, 0.0, 0.0]


class TestRootMultiset:
    def test_degree_counts_pairs_twice(self) -> None:
        roots = RootMultiset(real_roots=((1.0, 2),), conjugate_pairs=((0.0, 1.0, 1),), leading=3.0)

        assert roots.degree == 4
        assert roots.complex_count == 2
        assert len(roots.as_complex()) == 4

    def test_expand(self) -> None:
        roots = RootMultiset(real_roots=((2.0, 1),), conjugate_pairs=((0.0, 1.0, 1),), leading=2.0)

        # 2 (z - 2)(z^2 + 1)
        assert roots.expand().coeffs.tolist() == [-4.0, 2.0, -4.0, 2.0]

    def test_pairs_stored_in_upper_half_plane(self) -> None:
        with pytest.raises(ValueError):
            RootMultiset(conjugate_pairs=((0.0, -1.0, 1),), leading=1.0)


class TestFindRoots:
    @pytest.mark.parametrize("method", list(RootFindingMethod))
    def test_unit_circle_pair(self, method: RootFindingMethod) -> None:
        roots = find_roots(poly([1.0, 0.0, 1.0]), method=method)

        assert roots.real_roots == ()
        assert len(roots.conjugate_pairs) == 1

        x, y, multiplicity = roots.conjugate_pairs[0]
        assert abs(x) < 1e-12
        assert abs(y - 1.0) < 1e-12
        assert multiplicity == 1

    def test_double_root(self) -> None:
        # (z - 2)^2 (z + 3)
        p = poly(npoly.polyfromroots([2.0, 2.0, -3.0]).tolist())
        roots = find_roots(p)

        assert roots.degree == 3
        assert np.max(np.abs(p(roots.as_complex()))) < 1e-6
        assert_close_scaled(roots.expand().coeffs, p.coeffs, 1e-8)
        assert any(abs(value + 3.0) < 1e-10 for value, _ in roots.real_roots)

    def test_planted_roots(self, rng: np.random.Generator) -> None:
        reals = [-1.7, -0.4, 0.9, 1.6]
        pairs = [complex(0.3, 0.8), complex(-1.1, 0.5), complex(1.2, 1.4), complex(-0.2, 1.9)]
        planted = np.array(reals + pairs + [root.conjugate() for root in pairs])
        p = poly((3.0 * npoly.polyfromroots(planted).real).tolist())

        roots = find_roots(p)
        found = roots.as_complex()

        assert roots.degree == 12
        assert roots.complex_count == 8
        assert roots.leading == pytest.approx(3.0)

        for root in planted:
            assert np.min(np.abs(found - root)) <= 1e-8 * (1 + abs(root))

    def test_zero_roots_are_deflated(self) -> None:
        roots = find_roots(poly([0.0, 0.0, -1.0, 1.0]))

        assert (0.0, 2) in roots.real_roots
        assert any(abs(value - 1.0) < 1e-12 for value, _ in roots.real_roots)

    def test_companion_agrees_with_aberth(self, rng: np.random.Generator) -> None:
        p = poly(rng.standard_normal(9).tolist())
        aberth = np.sort_complex(find_roots(p).as_complex())
        companion = np.sort_complex(find_roots(p, method=RootFindingMethod.COMPANION).as_complex())

        assert np.max(np.abs(aberth - companion)) < 1e-8

    def test_zero_polynomial(self) -> None:
        with pytest.raises(ZeroSequence):
            find_roots(poly([0.0, 0.0]))

    def test_iteration_budget(self, rng: np.random.Generator) -> None:
        with pytest.raises(DidNotConverge) as exc_info:
            find_roots(poly(rng.standard_normal(11).tolist()), 1e-15, max_iterations=1)

        assert exc_info.value.iterations == 1
        assert exc_info.value.worst_residual > 1e-15
