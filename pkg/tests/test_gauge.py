import numpy as np
import pytest

from canonmap import (GaugeRadiusError, gauge_constants, near_isometry_report,
                      openness_transfer, perturb_metric_to_wd, random_space,
                      separation_profile, sphere_metrics, wd_distance)


def metric_triple(seed):
    """Three independent random metrics on one 6-point set, plus the base."""
    base = random_space(6, seed=seed)
    others = [random_space(6, seed=10_000 + 3 * seed + k).D for k in range(3)]
    return base, others


class TestWdDistance:
    def test_self_distance_vanishes(self, p3):
        assert wd_distance(p3.D, p3.D, p3.D).value == 0.0

    def test_doubling_gives_one(self, p3):
        # w(x, y) = sup_z |d(x,z) - d(y,z)| = d(x,y), attained at z in {x, y}
        rep = wd_distance(p3.D, p3.D, 2.0 * p3.D)
        assert rep.value == pytest.approx(1.0, abs=1e-15)

    def test_canonical_metric_distance(self, p3):
        rho = sphere_metrics(p3).rho
        rep = wd_distance(p3.D, p3.D, rho)
        assert rep.value == pytest.approx(1.0 - np.sqrt(2.0 / 3.0), abs=1e-12)

    def test_symmetry_exact(self):
        base, (s, f, _) = metric_triple(3)
        assert wd_distance(base.D, s, f).value == wd_distance(base.D, f, s).value

    def test_mismatched_sizes(self, p3, p2):
        with pytest.raises(ValueError):
            wd_distance(p3.D, p3.D, p2.D)

    def test_pseudometric_triangle_on_seeded_triples(self):
        for seed in range(50):
            base, (s, f, k) = metric_triple(seed)
            d = base.D
            assert (wd_distance(d, s, k).value
                    <= wd_distance(d, s, f).value + wd_distance(d, f, k).value + 1e-12)

    def test_scaling_bound(self):
        for seed in range(20):
            base, (sigma, _, _) = metric_triple(seed)
            rng = np.random.default_rng(seed)
            s, t = rng.uniform(0.0, 3.0, 2)
            L = gauge_constants(base.D, sigma).L
            assert wd_distance(base.D, s * sigma, t * sigma).value <= abs(t - s) * L + 1e-12

    def test_change_of_base_sandwich(self):
        for seed in range(20):
            base, (sigma, phi, kap) = metric_triple(seed)
            gc = gauge_constants(base.D, sigma)
            w_d = wd_distance(base.D, phi, kap).value
            w_sigma = wd_distance(sigma, phi, kap).value
            assert gc.ell * w_sigma <= w_d + 1e-12
            assert w_d <= gc.L * w_sigma + 1e-12


class TestOpennessTransfer:
    def test_same_metric_halves_epsilon(self, p3):
        cert = separation_profile(p3).best
        out = openness_transfer(p3, p3.D, cert, p3.D)
        assert out.epsilon == cert.epsilon / 2.0
        assert out.c == pytest.approx(cert.c, abs=1e-15)

    def test_within_radius_succeeds(self, p3):
        cert = separation_profile(p3).best   # (eps=1, c=2/3), radius 0.5
        phi, achieved = perturb_metric_to_wd(p3, p3.D, 0.1, seed=5)
        assert achieved < 0.5
        out = openness_transfer(p3, p3.D, cert, phi)
        ell = gauge_constants(phi, p3.D).ell
        assert out.epsilon == pytest.approx(ell * cert.epsilon / 2.0, abs=1e-12)

    def test_outside_radius_rejected(self, p3):
        cert = separation_profile(p3).best
        phi, achieved = perturb_metric_to_wd(p3, p3.D, 0.6, seed=5)
        assert achieved > 0.5
        with pytest.raises(GaugeRadiusError) as err:
            openness_transfer(p3, p3.D, cert, phi)
        assert err.value.measured == pytest.approx(achieved, abs=1e-12)
        assert err.value.radius == pytest.approx(0.5, abs=1e-12)

    def test_bad_certificate_rejected(self, p3):
        from canonmap import SeparationCertificate
        bogus = SeparationCertificate(epsilon=0.5, c=0.99, witness_pair=(0, 1))
        with pytest.raises(ValueError, match="certificate"):
            openness_transfer(p3, p3.D, bogus, p3.D)


class TestPerturbationGenerator:
    def test_hits_target_within_tolerance(self, p3):
        for seed in range(8):
            _, achieved = perturb_metric_to_wd(p3, p3.D, 0.2, seed=seed)
            assert abs(achieved - 0.2) <= 0.01 * 0.2

    def test_output_is_valid_metric(self, p3):
        from canonmap import validate_metric
        phi, _ = perturb_metric_to_wd(p3, p3.D, 0.3, seed=2)
        assert validate_metric(phi).passed


class TestNearIsometry:
    def test_equilateral_quantities(self, p3):
        rep = near_isometry_report(p3, r_d=0.3)
        assert rep.ell == pytest.approx(np.sqrt(2.0 / 3.0), abs=1e-12)
        assert rep.wd_d_rho == pytest.approx(0.1835034190722740, abs=1e-12)
        assert rep.lower_claim == pytest.approx(0.1010205144336438, abs=1e-12)
        assert rep.upper_claim == pytest.approx(0.2247448713915890, abs=1e-12)
        assert rep.lower_ok and rep.upper_ok
        # 1 / 1.3 = 0.769 < 0.8165
        assert rep.threshold_ok

    def test_isometric_canonical_map(self, p2):
        # the two-point space has rho = d, so every gap closes to zero
        rep = near_isometry_report(p2)
        assert rep.ell == pytest.approx(1.0, abs=1e-12)
        assert rep.wd_d_rho == pytest.approx(0.0, abs=1e-12)
        assert rep.lower_claim == pytest.approx(0.0, abs=1e-12)
        assert rep.threshold_ok is None

    def test_threshold_fails_for_small_radius(self, p3):
        rep = near_isometry_report(p3, r_d=0.1)
        assert not rep.threshold_ok   # 1/1.1 = 0.909 > 0.8165

    def test_heavy_space_normalized(self):
        space = random_space(8, seed=4, total_mass=3.0)
        rep = near_isometry_report(space)
        assert rep.normalized
        assert 0 < rep.ell <= 1.0 + 1e-12

    def test_claims_reported_on_corpus(self, corpus30):
        # the lower bound follows from delta(x,y)/d(x,y) reaching 1 - ell at
        # z = y, so it must hold everywhere; the upper bound is reported
        # only, and random spaces do violate it (hence pass/fail flags
        # instead of an assertion)
        reports = [near_isometry_report(s) for s in corpus30[:20]]
        assert all(rep.lower_ok for rep in reports)
        upper_failures = [rep for rep in reports if not rep.upper_ok]
        for rep in upper_failures:
            assert rep.wd_d_rho > rep.upper_claim   # flag is faithful
