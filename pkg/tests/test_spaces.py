import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canonmap import (MetricAxiomError, MetricMeasureSpace, StructuralError,
                      build_interval_grid, fixtures, gauge_constants,
                      lipschitz_constants, pushforward_along_canonical,
                      random_space, snowflake, validate_metric)
from canonmap.spaces import shortest_path_closure


class TestValidateMetric:
    def test_equilateral_passes(self, p3):
        assert validate_metric(p3.D).passed

    def test_triangle_violation_reported_with_witness(self):
        D = np.array([[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]])
        report = validate_metric(D)
        assert not report.passed
        (v,) = [v for v in report.violations if v.axiom == "triangle"]
        assert v.magnitude == pytest.approx(1.0, abs=1e-15)
        i, k, j = v.witness
        assert {i, k} == {0, 2} and j == 1

    def test_a2_model_passes_exhaustively(self):
        model = fixtures.a2(3, 17, 2.0)
        report = validate_metric(model.space.D)
        assert report.passed and report.mode == "exhaustive"

    def test_negative_entry_is_structural(self):
        D = np.zeros((2, 2))
        D[0, 1] = D[1, 0] = -1.0
        with pytest.raises(StructuralError):
            validate_metric(D)

    def test_non_square_is_structural(self):
        with pytest.raises(StructuralError):
            validate_metric(np.zeros((2, 3)))

    def test_asymmetry_is_axiom_violation(self):
        D = np.array([[0.0, 1.0], [2.0, 0.0]])
        report = validate_metric(D)
        assert any(v.axiom == "symmetry" for v in report.violations)

    def test_sampled_mode_needs_count_and_seed(self, p3):
        with pytest.raises(ValueError):
            validate_metric(p3.D, mode="sampled")
        report = validate_metric(p3.D, mode="sampled", samples=50, seed=3)
        assert report.passed and report.mode == "sampled"


class TestSnowflake:
    def test_identity_exponent(self, p3):
        assert np.array_equal(snowflake(p3.D, 1.0), p3.D)

    def test_two_point_square_root(self):
        D = np.array([[0.0, 4.0], [4.0, 0.0]])
        assert snowflake(D, 0.5)[0, 1] == 2.0

    def test_equilateral_unchanged_at_half(self, p3):
        out = snowflake(p3.D, 0.5)
        assert np.array_equal(out, p3.D)

    @pytest.mark.parametrize("s", [0.0, -0.5, 1.5])
    def test_exponent_out_of_range(self, p3, s):
        with pytest.raises(ValueError):
            snowflake(p3.D, s)

    @given(seed=st.integers(0, 10_000), s=st.floats(0.05, 1.0))
    @settings(max_examples=40, deadline=None)
    def test_preserves_axioms_and_structure(self, seed, s):
        space = random_space(6, seed=seed)
        out = snowflake(space.D, s, validate=True)
        assert np.array_equal(out, out.T)
        assert np.all(np.diag(out) == 0)
        # round trip through s=1 is the identity on the snowflaked matrix
        assert np.array_equal(snowflake(out, 1.0), out)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_identity_map_expansion_bound(self, seed):
        # Lip(id) from the t-snowflake to the s-snowflake (t < s) is capped
        # by diam^(s-t)
        rng = np.random.default_rng(seed)
        t = float(rng.uniform(0.1, 0.9))
        s = float(rng.uniform(t + 0.05, 1.0))
        space = random_space(7, seed=seed)
        lip = lipschitz_constants(space.D ** t, space.D ** s).upper
        assert lip <= space.diameter ** (s - t) + 1e-12


class TestGaugeConstants:
    def test_identity(self, p3):
        gc = gauge_constants(p3.D, p3.D)
        assert gc.ell == 1.0 and gc.L == 1.0

    def test_uniform_scaling(self, p3):
        gc = gauge_constants(p3.D, 2.0 * p3.D)
        assert gc.ell == 2.0 and gc.L == 2.0

    def test_against_induced_metric(self, p3):
        from canonmap import sphere_metrics
        gc = gauge_constants(p3.D, sphere_metrics(p3).rho)
        assert gc.ell == pytest.approx(np.sqrt(2.0 / 3.0), abs=1e-12)
        assert gc.L == pytest.approx(np.sqrt(2.0 / 3.0), abs=1e-12)

    def test_size_mismatch(self, p3, p2):
        with pytest.raises(ValueError):
            gauge_constants(p3.D, p2.D)


class TestIntervalGrid:
    def test_two_points(self):
        grid = build_interval_grid(2)
        assert grid.D[0, 1] == 1.0
        assert np.array_equal(grid.weights, [0.5, 0.5])

    def test_three_points(self):
        grid = build_interval_grid(3)
        assert grid.D[0, 2] == 1.0 and grid.D[0, 1] == 0.5

    def test_large_grid_mass_and_diameter(self):
        grid = build_interval_grid(1000)
        assert grid.diameter == 1.0
        assert grid.total_mass == pytest.approx(1.0, abs=1e-12)

    def test_too_small(self):
        with pytest.raises(ValueError):
            build_interval_grid(1)


class TestPushforward:
    def test_equilateral_image(self, p3):
        out = pushforward_along_canonical(p3)
        side = np.sqrt(2.0 / 3.0)
        off = ~np.eye(3, dtype=bool)
        assert np.allclose(out.D[off], side, atol=1e-12)
        assert np.array_equal(out.weights, p3.weights)

    def test_two_point_formula(self, p2):
        # sqrt(((1-0)^2 + (0-1)^2) / 2) = 1
        out = pushforward_along_canonical(p2)
        assert out.D[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_mass_preserved_exactly(self, corpus30):
        for space in corpus30[:10]:
            out = pushforward_along_canonical(space)
            assert out.total_mass == space.total_mass


class TestSpaceConstruction:
    def test_rejects_axiom_violation(self):
        D = np.array([[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]])
        with pytest.raises(MetricAxiomError):
            MetricMeasureSpace(("a", "b", "c"), D, np.full(3, 1.0))

    def test_rejects_nonpositive_weight(self, p3):
        with pytest.raises(StructuralError):
            MetricMeasureSpace(p3.labels, p3.D, np.array([1.0, 0.0, 1.0]))

    def test_arrays_are_immutable(self, p3):
        with pytest.raises(ValueError):
            p3.D[0, 1] = 7.0

    def test_random_spaces_are_valid_with_unit_mass(self):
        for seed in range(5):
            space = random_space(12, seed=seed)
            assert space.validation.passed
            assert space.total_mass == pytest.approx(1.0, abs=1e-12)
        raw = random_space(12, seed=0, total_mass=None)
        assert raw.total_mass > 2.0

    def test_closure_restores_triangle(self):
        rng = np.random.default_rng(11)
        M = rng.uniform(0.1, 1.0, size=(8, 8))
        M = (M + M.T) / 2
        np.fill_diagonal(M, 0.0)
        assert validate_metric(shortest_path_closure(M)).passed
