"""Uniformity tests and summary statistics."""

import math

import numpy as np
import pytest

import polysample as ps
from polysample.errors import InsufficientDataError, TooLargeError

scipy_stats = pytest.importorskip("scipy.stats")


class TestCriticalValue:
    def test_against_scipy(self):
        for dof in range(10, 200, 13):
            want = scipy_stats.chi2.ppf(0.999, dof)
            got = ps.chi2_critical_001(dof)
            assert got == pytest.approx(want, rel=0.01)

    def test_small_dof_still_close(self):
        for dof in (1, 2, 3, 5, 9):
            want = scipy_stats.chi2.ppf(0.999, dof)
            assert ps.chi2_critical_001(dof) == pytest.approx(want, rel=0.04)

    def test_monotone_in_dof(self):
        vals = [ps.chi2_critical_001(d) for d in range(1, 50)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            ps.chi2_critical_001(0)


class TestChiSquareBins:
    def test_uniform_square_passes(self, square):
        P, V, D = square
        batch = ps.dbsop_sample(P, D, 100_000, seed=1)
        report = ps.chi_square_bins(batch, P, grid=10)
        assert report.passed
        assert report.dof == 99
        assert report.statistic < report.critical_value_001

    def test_biased_input_fails(self, square):
        # points crowded into the lower-left quadrant
        P, V, D = square
        rng = np.random.Generator(np.random.PCG64(2))
        pts = rng.uniform(0.0, 0.5, size=(20_000, 2))
        batch = ps.SampleBatch(
            points=pts,
            simplex_index=np.full(20_000, -1, dtype=np.int64),
            seed=0,
            sampler_id="rejection",
        )
        report = ps.chi_square_bins(batch, P, grid=4)
        assert not report.passed

    def test_simplex_cells_off_support_are_excluded(self, simplex2):
        # cells of the box grid outside the simplex get zero mass and
        # must not contribute degrees of freedom
        P, V, D = simplex2
        batch = ps.dbsop_sample(P, D, 50_000, seed=3)
        report = ps.chi_square_bins(batch, P, grid=4)
        assert report.passed
        # 10 of the 16 box cells intersect the triangle with positive area
        assert report.dof <= 10

    def test_insufficient_data(self, square):
        P, V, D = square
        batch = ps.dbsop_sample(P, D, 50, seed=4)
        with pytest.raises(InsufficientDataError):
            ps.chi_square_bins(batch, P, grid=10)

    def test_bad_grid(self, square):
        P, V, D = square
        batch = ps.dbsop_sample(P, D, 1000, seed=5)
        with pytest.raises(ValueError):
            ps.chi_square_bins(batch, P, grid=1)

    def test_dimension_mismatch(self, square, cube3):
        P2, _, D2 = square
        P3, _, _ = cube3
        batch = ps.dbsop_sample(P2, D2, 1000, seed=6)
        with pytest.raises(ValueError):
            ps.chi_square_bins(batch, P3, grid=4)

    def test_grid_explosion_guarded(self, cube3):
        P, V, D = cube3
        batch = ps.dbsop_sample(P, D, 1000, seed=7)
        with pytest.raises(TooLargeError):
            ps.chi_square_bins(batch, P, grid=100)

    def test_hit_and_run_also_passes(self, square):
        P, V, D = square
        batch = ps.hit_and_run_sample(P, 20_000, seed=8)
        report = ps.chi_square_bins(batch, P, grid=5)
        assert report.passed


class TestChiSquareMembership:
    def test_cube_passes(self, cube3):
        P, V, D = cube3
        batch = ps.dbsop_sample(P, D, 60_000, seed=10)
        report = ps.chi_square_membership(batch, D)
        assert report.passed
        assert report.dof == D.size - 1

    def test_wrong_assignment_fails(self, cube3):
        P, V, D = cube3
        batch = ps.dbsop_sample(P, D, 60_000, seed=11)
        skew = ps.SampleBatch(
            points=batch.points,
            simplex_index=np.zeros(batch.count, dtype=np.int64),
            seed=batch.seed,
            sampler_id="dbsop",
        )
        report = ps.chi_square_membership(skew, D)
        assert not report.passed

    def test_single_simplex_trivially_passes(self, simplex2):
        P, V, D = simplex2
        batch = ps.dbsop_sample(P, D, 1000, seed=12)
        report = ps.chi_square_membership(batch, D)
        assert report.passed
        assert report.statistic == 0.0
        assert report.dof == 1

    def test_negative_index_rejected(self, cube3):
        P, V, D = cube3
        batch = ps.hit_and_run_sample(P, 100, seed=13)  # indices are -1
        with pytest.raises(ValueError):
            ps.chi_square_membership(batch, D)

    def test_out_of_range_index_rejected(self, cube3):
        P, V, D = cube3
        bad = ps.SampleBatch(
            points=np.zeros((5, 3)),
            simplex_index=np.full(5, D.size, dtype=np.int64),
            seed=0,
            sampler_id="dbsop",
        )
        with pytest.raises(ValueError):
            ps.chi_square_membership(bad, D)


class TestCalibration:
    def test_pass_rate_over_seeds(self, square):
        """At level 0.001 with exact expected counts, false rejection of a
        correct sampler should be rare; 10/10 clean seeds is the norm."""
        P, V, D = square
        passed = 0
        for seed in range(10):
            batch = ps.dbsop_sample(P, D, 20_000, seed=seed)
            if ps.chi_square_bins(batch, P, grid=5).passed:
                passed += 1
        assert passed >= 9


class TestScMetric:
    def test_examples(self):
        assert ps.sc_metric(16, 2) == pytest.approx(8.0)
        assert ps.sc_metric(30, 3) == pytest.approx(10.0)
        assert ps.sc_metric(56, 5) == pytest.approx(11.2)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            ps.sc_metric(0, 3)
        with pytest.raises(ValueError):
            ps.sc_metric(10, 0)


class TestMoments:
    def test_square_mean_and_covariance(self, square):
        P, V, D = square
        N = 100_000
        batch = ps.dbsop_sample(P, D, N, seed=20)
        rep = ps.moment_report(batch)
        np.testing.assert_allclose(rep.mean, [0.5, 0.5], atol=0.005)
        # var of (x - 1/2)^2 under U(0,1) is 1/180
        se_var = math.sqrt((1.0 / 180.0) / N)
        assert rep.covariance[0, 0] == pytest.approx(1.0 / 12.0, abs=4 * se_var)
        assert rep.covariance[1, 1] == pytest.approx(1.0 / 12.0, abs=4 * se_var)
        assert abs(rep.covariance[0, 1]) <= 4 * se_var

    def test_cross_polytope_centered(self, pipeline):
        P, V, D = pipeline("crosspolytope", 3)
        batch = ps.dbsop_sample(P, D, 100_000, seed=21)
        rep = ps.moment_report(batch)
        np.testing.assert_allclose(rep.mean, 0.0, atol=0.01)

    def test_2simplex_mean(self, simplex2):
        P, V, D = simplex2
        batch = ps.dbsop_sample(P, D, 100_000, seed=22)
        rep = ps.moment_report(batch)
        np.testing.assert_allclose(rep.mean, [1.0 / 3.0, 1.0 / 3.0], atol=0.005)

    def test_needs_two_points(self, square):
        P, V, D = square
        one = ps.SampleBatch(
            points=np.array([[0.5, 0.5]]),
            simplex_index=np.array([0], dtype=np.int64),
            seed=0,
            sampler_id="dbsop",
        )
        with pytest.raises(InsufficientDataError):
            ps.moment_report(one)
