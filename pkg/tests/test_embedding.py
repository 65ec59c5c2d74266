import numpy as np
import pytest
from sklearn.base import clone

from canonmap import (CanonicalEmbedding, MetricMeasureSpace,
                      PointConfiguration, canonical_constants,
                      canonical_image, centered_gram, direction_set,
                      embed_pipeline, lipschitz_constants, project_search,
                      quadruple_inequalities, schoenberg_test,
                      build_interval_grid)


def helix_space(n=100):
    t = np.linspace(0, 4 * np.pi, n)
    pts = np.stack([np.cos(t), np.sin(t), t / (4 * np.pi)], axis=1)
    D = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(D, 0.0)
    return MetricMeasureSpace(tuple(map(str, range(n))), D, np.full(n, 1.0 / n))


class TestSchoenberg:
    def test_hub_and_spokes_not_embeddable(self, t4):
        spectrum = schoenberg_test(t4.D)
        assert not spectrum.embeddable
        assert centered_gram(t4.D)[0, 0] == pytest.approx(-0.1875, abs=1e-12)

    def test_equilateral_is_planar(self, p3):
        spectrum = schoenberg_test(p3.D)
        assert spectrum.embeddable and spectrum.min_dimension == 2

    def test_collinear_points_are_one_dimensional(self):
        D = np.abs(np.array([0.0, 0.5, 1.0])[:, None] - np.array([0.0, 0.5, 1.0])[None, :])
        spectrum = schoenberg_test(D)
        assert spectrum.embeddable and spectrum.min_dimension == 1

    def test_own_configuration_always_embeddable(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            pts = PointConfiguration(rng.standard_normal((8, 3)))
            spectrum = schoenberg_test(pts.distances())
            assert spectrum.embeddable
            assert spectrum.min_dimension <= 3


class TestProjectSearch:
    def test_identity_dimension_pca(self):
        rng = np.random.default_rng(1)
        pts = PointConfiguration(rng.standard_normal((10, 4)))
        rep = project_search(pts, 4, method="pca")
        assert rep.distortion == pytest.approx(1.0, abs=1e-9)

    def test_equilateral_image_is_planar(self, p3):
        pts = PointConfiguration(canonical_image(p3).W, "canonical-image")
        rep = project_search(pts, 2, method="pca", weights=p3.weights)
        assert rep.distortion == pytest.approx(1.0, abs=1e-9)

    def test_helix_gaussian_distortion(self):
        pts = PointConfiguration(canonical_image(helix_space()).W, "canonical-image")
        rep = project_search(pts, 8, trials=200, seed=7, method="gaussian")
        assert rep.distortion <= 3.0

    def test_best_so_far_monotone_in_trials(self):
        pts = PointConfiguration(canonical_image(helix_space(40)).W, "canonical-image")
        values = [project_search(pts, 4, trials=k, seed=11).distortion
                  for k in (1, 5, 20, 60)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_gaussian_is_reproducible(self, p3):
        pts = PointConfiguration(canonical_image(p3).W)
        a = project_search(pts, 2, trials=7, seed=42)
        b = project_search(pts, 2, trials=7, seed=42)
        assert np.array_equal(a.coords, b.coords)
        assert a.distortion == b.distortion

    def test_pca_clamps_with_warning(self, p3):
        pts = PointConfiguration(canonical_image(p3).W)
        with pytest.warns(UserWarning, match="clamped"):
            rep = project_search(pts, 10, method="pca")
        assert rep.N == 3

    def test_bad_arguments(self, p3):
        pts = PointConfiguration(canonical_image(p3).W)
        with pytest.raises(ValueError):
            project_search(pts, 0)
        with pytest.raises(ValueError):
            project_search(pts, 2, trials=0)
        with pytest.raises(ValueError):
            project_search(pts, 2, method="fourier")


class TestEmbedPipeline:
    def test_equilateral_composite_is_similarity(self, p3):
        rep = embed_pipeline(p3, 2, method="pca")
        scale = np.sqrt(2.0 / 3.0)
        assert rep.lower == pytest.approx(scale, abs=1e-12)
        assert rep.upper == pytest.approx(scale, abs=1e-12)
        assert rep.distortion == pytest.approx(1.0, abs=1e-9)

    def test_two_points_embed_isometrically_in_line(self, p2):
        rep = embed_pipeline(p2, 1, method="pca")
        assert rep.distortion == pytest.approx(1.0, abs=1e-12)

    def test_composite_constants_compose(self, corpus30):
        for space in corpus30[:10]:
            rep = embed_pipeline(space, 3, method="gaussian", trials=5, seed=3)
            img = canonical_image(space).W
            pts = PointConfiguration(img)
            step = lipschitz_constants(pts.distances(),
                                       PointConfiguration(rep.coords).distances())
            iota = canonical_constants(space).iota_d
            assert rep.lower >= iota.lower * step.lower - 1e-12
            assert rep.upper <= iota.upper * step.upper + 1e-12

    def test_kernel_route_produces_report(self, a2_model):
        rep = embed_pipeline(a2_model.space, 20, method="gaussian", trials=3,
                             seed=0, via_kernel=True)
        assert rep.lower > 0 and np.isfinite(rep.distortion)


class TestDirectionSet:
    def test_two_points(self, p2):
        rep = direction_set(PointConfiguration(np.array([[0.0], [1.0]])))
        assert rep.count == 2

    def test_equilateral_planar(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
        rep = direction_set(PointConfiguration(pts))
        assert rep.count == 6
        assert rep.n_clusters == 3   # three axes, signs collapsed

    def test_interval_image_count(self):
        pts = PointConfiguration(canonical_image(build_interval_grid(16)).W)
        assert direction_set(pts).count == 240

    def test_duplicate_points_rejected(self):
        pts = PointConfiguration(np.zeros((2, 3)))
        with pytest.raises(ValueError, match="duplicate"):
            direction_set(pts)


class TestQuadruples:
    def test_metric_branch_on_fixtures(self, p2, p3, t4):
        for space in (p2, p3, t4):
            for p in (1.5, 2.0, 3.0):
                rep = quadruple_inequalities(space=space, p=p)
                assert rep.sob2_max_violation <= 1e-12
                assert rep.sob1_best_L is None

    def test_hub_and_spokes_known_case(self, p3):
        # quadruple (a, b, a, c): |0 - 1 - (1 - 1)| = 1 <= 2
        rep = quadruple_inequalities(space=p3, p=2.0)
        assert rep.mode == "exhaustive"
        assert rep.quadruples_checked == 3 ** 4

    def test_unit_square_empirical_constant(self):
        corners = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        rep = quadruple_inequalities(points=PointConfiguration(corners), p=2.0)
        assert rep.sob1_best_L is not None
        assert np.isfinite(rep.sob1_best_L) and rep.sob1_best_L > 0

    def test_sampled_mode_beyond_cap(self):
        grid = build_interval_grid(70)
        rep = quadruple_inequalities(space=grid, p=2.0, seed=1, samples=200_000)
        assert rep.mode == "sampled"
        assert rep.sob2_max_violation <= 1e-12

    def test_argument_validation(self, p3):
        with pytest.raises(ValueError):
            quadruple_inequalities(space=p3, p=1.0)
        with pytest.raises(ValueError):
            quadruple_inequalities()
        with pytest.raises(ValueError):
            quadruple_inequalities(space=p3, points=PointConfiguration(np.eye(3)))


class TestEstimator:
    def test_fit_transform_matches_pipeline(self, p3):
        est = CanonicalEmbedding(n_components=2, method="pca")
        Y = est.fit_transform(np.asarray(p3.D))
        assert Y.shape == (3, 2)
        assert est.report_.distortion == pytest.approx(1.0, abs=1e-9)
        assert np.array_equal(Y, est.embedding_)

    def test_transform_training_rows_reproduce_embedding(self, p3):
        est = CanonicalEmbedding(n_components=2, method="pca").fit(np.asarray(p3.D))
        assert np.allclose(est.transform(np.asarray(p3.D)), est.embedding_, atol=1e-12)

    def test_transform_interpolates_new_points(self):
        grid = build_interval_grid(9)
        est = CanonicalEmbedding(n_components=1, method="pca").fit(
            np.asarray(grid.D), weights=grid.weights)
        # distances from the midpoint of the first grid cell to all grid points
        t_new = 1.0 / 16.0
        row = np.abs(grid.D[0] * 0 + np.arange(9) / 8.0 - t_new)[None, :]
        y = est.transform(row)
        lo, hi = sorted((est.embedding_[0, 0], est.embedding_[1, 0]))
        assert lo <= y[0, 0] <= hi

    def test_sklearn_protocol(self, p3):
        est = CanonicalEmbedding(n_components=2, trials=5, random_state=1)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()
        est.set_params(method="gaussian")
        est.fit(np.asarray(p3.D))
        assert est.report_.method == "gaussian"

    def test_gaussian_route_deterministic(self, p3):
        D = np.asarray(p3.D)
        a = CanonicalEmbedding(2, method="gaussian", trials=6, random_state=3).fit_transform(D)
        b = CanonicalEmbedding(2, method="gaussian", trials=6, random_state=3).fit_transform(D)
        assert np.array_equal(a, b)

    def test_kernel_route_transform(self, p3):
        D = np.asarray(p3.D)
        est = CanonicalEmbedding(n_components=2, method="pca", via_kernel=True).fit(D)
        assert np.allclose(est.transform(D), est.embedding_, atol=1e-12)
