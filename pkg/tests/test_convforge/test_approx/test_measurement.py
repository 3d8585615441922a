import numpy as np
import pytest

from convforge.approx.measurement import ErrorReport, GridKind, GridSpec, sample_points, sup_error
from convforge.approx.targets import GaussianBump
from convforge.network.construction import build_network
from convforge.testing.helpers import random_ridge
from convforge.utils.numeric import scale_of


class TestGridSpec:
    def test_tensor(self) -> None:
        points = sample_points(GridSpec.tensor(3), 2)

        assert points.shape == (9, 2)
        assert sorted(set(points[:, 0].tolist())) == [-1.0, 0.0, 1.0]

    def test_latin_hypercube_inside_cube(self) -> None:
        points = sample_points(GridSpec.latin_hypercube(500, seed=1), 4)

        assert points.shape == (500, 4)
        assert np.all(np.abs(points) <= 1.0)

    def test_latin_hypercube_seeded(self) -> None:
        spec = GridSpec.latin_hypercube(64, seed=8)

        assert np.array_equal(sample_points(spec, 3), sample_points(spec, 3))
        assert not np.array_equal(sample_points(spec, 3), sample_points(GridSpec.latin_hypercube(64, seed=9), 3))

    @pytest.mark.parametrize("kind", list(GridKind))
    def test_size_required(self, kind: GridKind) -> None:
        with pytest.raises(ValueError):
            GridSpec(kind=kind)


class TestSupError:
    grid = GridSpec.latin_hypercube(1000, seed=0)

    def test_identical(self) -> None:
        target = GaussianBump(d=2)

        assert sup_error(target, target, self.grid, 2) == 0.0

    def test_constant_shift(self) -> None:
        target = GaussianBump(d=2)

        assert sup_error(target, lambda x: target(x) + 0.25, self.grid, 2) == pytest.approx(0.25)

    def test_network_against_its_ridge(self, rng: np.random.Generator) -> None:
        ridge = random_ridge(rng, 3, 2)
        net = build_network(ridge, 3, 5)

        scale = scale_of(ridge(sample_points(self.grid, 3)))

        assert sup_error(ridge, net, self.grid, 3, threads=3) <= 1e-8 * scale


class TestErrorReport:
    def test_nonnegative(self) -> None:
        with pytest.raises(ValueError):
            ErrorReport(
                sup_error=-1.0,
                grid_spec=GridSpec.tensor(3),
                J=4,
                param_count=10,
                m=1,
                s=2,
                d=2,
                width=10,
                fit_error=0.0,
                realization_error=0.0,
                theoretical_rate=0.3,
            )

    def test_csv_row(self) -> None:
        report = ErrorReport(
            sup_error=0.1,
            grid_spec=GridSpec.latin_hypercube(128, seed=2),
            J=4,
            param_count=50,
            m=1,
            s=2,
            d=2,
            width=10,
            fit_error=0.1,
            realization_error=1e-12,
            theoretical_rate=0.29,
        )
        row = report.csv_row()

        assert row["grid"] == "lhs"
        assert row["grid_size"] == 128
        assert "grid_spec" not in row
        assert row["J"] == 4
