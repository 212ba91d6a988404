"""Sampler correctness: moments, containment, determinism, baselines."""

import math

import numpy as np
import pytest

import polysample as ps
from polysample.errors import (
    NotBoundedError,
    NumericalDegeneracyError,
    TooThinPolytopeError,
)
from polysample.samplers import RngStream


def cone_2d() -> ps.Polytope:
    # unbounded cone: x >= 0, y >= 0, x - y <= 1; directions between
    # (0, 1) and (1, 1) give chords with no upper intersection
    A = np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, -1.0]])
    b = np.array([0.0, 0.0, 1.0])
    return ps.Polytope(A, b)


class TestUnitSimplex:
    def test_mean_n1(self):
        rng = RngStream(0)
        w = ps.sample_unit_simplex(rng, 1)
        draws = np.array([ps.sample_unit_simplex(RngStream(s), 1)[0] for s in range(2000)])
        assert w.shape == (1,)
        # cheap sanity across seeds; the real mean check is vectorized below
        assert abs(draws.mean() - 0.5) < 0.05

    def test_mean_n1_large(self):
        from polysample.samplers import _unit_simplex_batch

        rng = RngStream(42)
        W = _unit_simplex_batch(rng, 1, 100_000)
        assert abs(W.mean() - 0.5) <= 0.005

    def test_means_n3(self):
        from polysample.samplers import _unit_simplex_batch

        rng = RngStream(7)
        N = 100_000
        W = _unit_simplex_batch(rng, 3, N)
        # each coordinate is Beta(1, 3): mean 1/4, var 3/80
        se = math.sqrt((3.0 / 80.0) / N)
        np.testing.assert_allclose(W.mean(axis=0), 0.25, atol=3 * se)

    def test_weights_valid(self):
        from polysample.samplers import _unit_simplex_batch

        W = _unit_simplex_batch(RngStream(1), 4, 5000)
        assert np.all(W >= 0.0)
        assert np.all(W.sum(axis=1) <= 1.0 + 1e-12)


class TestCategorical:
    def test_fair_coin_frequency(self):
        rng = RngStream(11)
        draws = np.array(
            [ps.sample_categorical(rng, np.array([0.5, 0.5])) for _ in range(100_000)]
        )
        freq = draws.mean()
        assert 0.49 <= freq <= 0.51

    def test_ten_categories_chi_square(self):
        rng0 = np.random.Generator(np.random.PCG64(5))
        q = rng0.uniform(0.5, 1.5, size=10)
        q /= q.sum()
        rng = RngStream(6)
        N = 50_000
        draws = np.array([ps.sample_categorical(rng, q) for _ in range(N)])
        counts = np.bincount(draws, minlength=10)
        expected = N * q
        stat = float(((counts - expected) ** 2 / expected).sum())
        assert stat <= ps.chi2_critical_001(9)

    def test_never_out_of_range(self):
        rng = RngStream(3)
        q = np.array([1e-12, 1.0 - 2e-12, 1e-12])
        draws = [ps.sample_categorical(rng, q) for _ in range(1000)]
        assert min(draws) >= 0 and max(draws) <= 2

    def test_rejects_bad_weights(self):
        rng = RngStream(0)
        with pytest.raises(ValueError):
            ps.sample_categorical(rng, np.array([0.5, 0.4]))  # sums to 0.9
        with pytest.raises(ValueError):
            ps.sample_categorical(rng, np.array([-0.1, 1.1]))


class TestDbsop:
    def test_square_means(self, square):
        P, V, D = square
        batch = ps.dbsop_sample(P, D, 100_000, seed=1)
        np.testing.assert_allclose(batch.points.mean(axis=0), 0.5, atol=0.005)

    def test_2simplex_halving_probability(self, simplex2):
        P, V, D = simplex2
        batch = ps.dbsop_sample(P, D, 100_000, seed=2)
        inside = batch.points.sum(axis=1) <= 0.5
        # the scaled-by-half simplex has a quarter of the area
        assert abs(inside.mean() - 0.25) <= 0.006

    def test_containment_every_point(self, pipeline):
        for name, n in [("hypercube", 3), ("crosspolytope", 3), ("simplex", 4)]:
            P, V, D = pipeline(name, n)
            batch = ps.dbsop_sample(P, D, 10_000, seed=3)
            assert ps.contains_all(P, batch.points, eps=1e-8).all()

    def test_simplex_index_matches_point(self, cube3):
        P, V, D = cube3
        batch = ps.dbsop_sample(P, D, 2_000, seed=4)
        for k in range(D.size):
            pts = batch.points[batch.simplex_index == k]
            if len(pts):
                assert ps.simplex_contains(D.simplices[k], pts, eps=1e-9).all()

    def test_deterministic_bytes(self, cube3):
        P, V, D = cube3
        b1 = ps.dbsop_sample(P, D, 5_000, seed=9)
        b2 = ps.dbsop_sample(P, D, 5_000, seed=9)
        assert b1.points.tobytes() == b2.points.tobytes()
        assert b1.simplex_index.tobytes() == b2.simplex_index.tobytes()
        b3 = ps.dbsop_sample(P, D, 5_000, seed=10)
        assert b1.points.tobytes() != b3.points.tobytes()

    def test_stream_order_is_documented_one(self, cube3):
        """Exponentials (N, n+1) row-major first, then N uniforms."""
        P, V, D = cube3
        N, n = 777, P.n
        batch = ps.dbsop_sample(P, D, N, seed=123)
        gen = np.random.Generator(np.random.PCG64(123))
        E = gen.standard_exponential((N, n + 1))
        U = gen.random(N)
        W = E[:, 1:] / E.sum(axis=1, keepdims=True)
        cdf = np.cumsum(D.weights)
        idx = np.minimum(np.searchsorted(cdf, U, side="right"), D.size - 1)
        np.testing.assert_array_equal(batch.simplex_index, idx)
        pts = D.origin_stack[idx] + np.einsum("kij,kj->ki", D.edge_stack[idx], W)
        np.testing.assert_allclose(batch.points, pts, rtol=0, atol=1e-12)

    def test_mixture_hits_all_simplices(self, cube3):
        P, V, D = cube3
        batch = ps.dbsop_sample(P, D, 20_000, seed=5)
        counts = np.bincount(batch.simplex_index, minlength=D.size)
        assert (counts > 0).all()

    def test_rejects_bad_n(self, square):
        P, V, D = square
        with pytest.raises(ValueError):
            ps.dbsop_sample(P, D, 0, seed=0)


class TestDbsopParallel:
    def test_single_thread_equals_serial(self, cube3):
        P, V, D = cube3
        a = ps.dbsop_sample(P, D, 4_000, seed=20)
        b = ps.dbsop_sample_parallel(P, D, 4_000, seed=20, n_threads=1)
        assert a.points.tobytes() == b.points.tobytes()

    def test_multithread_deterministic(self, cube3):
        P, V, D = cube3
        a = ps.dbsop_sample_parallel(P, D, 10_001, seed=21, n_threads=3)
        b = ps.dbsop_sample_parallel(P, D, 10_001, seed=21, n_threads=3)
        assert a.points.tobytes() == b.points.tobytes()
        assert a.count == 10_001
        assert ps.contains_all(P, a.points, eps=1e-8).all()

    def test_env_cap(self, cube3, monkeypatch):
        from polysample.samplers import ENV_THREADS

        P, V, D = cube3
        monkeypatch.setenv(ENV_THREADS, "2")
        a = ps.dbsop_sample_parallel(P, D, 3_000, seed=22)
        b = ps.dbsop_sample_parallel(P, D, 3_000, seed=22, n_threads=2)
        assert a.points.tobytes() == b.points.tobytes()

    def test_env_invalid(self, cube3, monkeypatch):
        from polysample.samplers import ENV_THREADS

        P, V, D = cube3
        monkeypatch.setenv(ENV_THREADS, "zero")
        with pytest.raises(ValueError):
            ps.dbsop_sample_parallel(P, D, 100, seed=0)


class TestHitAndRun:
    def test_square_means(self, square):
        P, V, D = square
        batch = ps.hit_and_run_sample(P, 10_000, seed=30)
        np.testing.assert_allclose(batch.points.mean(axis=0), 0.5, atol=0.01)

    def test_containment(self, pipeline):
        P, V, D = pipeline("crosspolytope", 3)
        batch = ps.hit_and_run_sample(P, 5_000, seed=31)
        assert ps.contains_all(P, batch.points, eps=1e-8).all()
        assert batch.count == 5_000

    def test_deterministic_bytes(self, square):
        P, V, D = square
        a = ps.hit_and_run_sample(P, 2_000, seed=32)
        b = ps.hit_and_run_sample(P, 2_000, seed=32)
        assert a.points.tobytes() == b.points.tobytes()

    def test_explicit_start_point(self, square):
        P, V, D = square
        x0 = np.array([0.25, 0.75])
        batch = ps.hit_and_run_sample(P, 500, x0=x0, seed=33)
        assert batch.count == 500

    def test_infeasible_start_rejected(self, square):
        P, V, D = square
        with pytest.raises(ValueError):
            ps.hit_and_run_sample(P, 10, x0=np.array([5.0, 5.0]), seed=0)

    def test_unbounded_detected(self):
        # an eighth of all directions escape, so 1000 burn-in steps find one
        P = cone_2d()
        with pytest.raises(NotBoundedError):
            ps.hit_and_run_sample(P, 10, x0=np.array([0.5, 0.5]), seed=0)

    def test_zero_width_detected(self):
        # the feasible set is the segment {x = 0, 0 <= y <= 1}
        A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        b = np.array([0.0, 0.0, 1.0, 0.0])
        P = ps.Polytope(A, b)
        with pytest.raises(NumericalDegeneracyError):
            ps.hit_and_run_sample(P, 10, x0=np.array([0.0, 0.5]), seed=0)

    def test_thinning_controls_length(self, square):
        P, V, D = square
        a = ps.hit_and_run_sample(P, 100, burn_in=50, thin=1, seed=34)
        b = ps.hit_and_run_sample(P, 100, burn_in=50, thin=7, seed=34)
        assert a.count == b.count == 100
        assert a.points.tobytes() != b.points.tobytes()


class TestRejection:
    def test_own_box_accepts_everything(self, square):
        P, V, D = square
        lo, hi = ps.bounding_box(V)
        batch = ps.rejection_sample(P, (lo, hi), 10_000, seed=40)
        assert batch.acceptance_rate == 1.0
        assert batch.count == 10_000

    def test_2simplex_acceptance_half(self, simplex2):
        # the unit 2-simplex fills half its bounding square
        P, V, D = simplex2
        lo, hi = ps.bounding_box(V)
        batch = ps.rejection_sample(P, (lo, hi), 50_000, seed=41)
        assert abs(batch.acceptance_rate - 0.5) <= 0.005

    def test_simplex4_acceptance_rate(self, pipeline):
        # Vol = 1/24 of the unit box
        P, V, D = pipeline("simplex", 4)
        lo, hi = ps.bounding_box(V)
        N = 2_000
        batch = ps.rejection_sample(P, (lo, hi), N, seed=42)
        p = 1.0 / 24.0
        # proposals needed is about N / p; bound the estimator's 3 SE from that
        se = math.sqrt(p * (1.0 - p) / (N / p))
        assert abs(batch.acceptance_rate - p) <= 3 * se

    def test_containment(self, pipeline):
        P, V, D = pipeline("crosspolytope", 3)
        lo, hi = ps.bounding_box(V)
        batch = ps.rejection_sample(P, (lo, hi), 5_000, seed=43)
        assert ps.contains_all(P, batch.points, eps=0.0).all()

    def test_deterministic_bytes(self, simplex2):
        P, V, D = simplex2
        lo, hi = ps.bounding_box(V)
        a = ps.rejection_sample(P, (lo, hi), 3_000, seed=44)
        b = ps.rejection_sample(P, (lo, hi), 3_000, seed=44)
        assert a.points.tobytes() == b.points.tobytes()
        assert a.acceptance_rate == b.acceptance_rate

    def test_too_thin_gives_up(self):
        # feasible sliver occupies 1e-12 of the proposal box
        A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        b = np.array([1.0, 0.0, 1e-12, 0.0])
        P = ps.Polytope(A, b)
        box = (np.zeros(2), np.ones(2))
        with pytest.raises(TooThinPolytopeError):
            ps.rejection_sample(P, box, 100, seed=45)

    def test_bad_box_rejected(self, square):
        P, V, D = square
        with pytest.raises(ValueError):
            ps.rejection_sample(P, (np.zeros(2), np.zeros(2)), 10, seed=0)
        with pytest.raises(ValueError):
            ps.rejection_sample(P, (np.zeros(3), np.ones(3)), 10, seed=0)


class TestAgreementWithRejection:
    """Dual route: the direct sampler against plain box rejection."""

    @pytest.mark.parametrize("n,seed", [(2, 60), (3, 61), (4, 62)])
    def test_subbox_frequencies_agree(self, n, seed):
        P = ps.random_polytope(n, seed=seed)
        V = ps.enumerate_vertices(P)
        D = ps.triangulate(P, V)
        lo, hi = ps.bounding_box(V)
        N = 100_000
        direct = ps.dbsop_sample(P, D, N, seed=seed + 1)
        baseline = ps.rejection_sample(P, (lo, hi), N, seed=seed + 2)
        rng = np.random.Generator(np.random.PCG64(seed + 3))
        for _ in range(20):
            center = rng.uniform(lo, hi)
            half = rng.uniform(0.1, 0.35) * (hi - lo)
            a, b = center - half, center + half
            in1 = np.all((direct.points >= a) & (direct.points <= b), axis=1)
            in2 = np.all((baseline.points >= a) & (baseline.points <= b), axis=1)
            f1, f2 = in1.mean(), in2.mean()
            pooled = (in1.sum() + in2.sum()) / (2 * N)
            se = math.sqrt(max(pooled * (1 - pooled), 1e-12) * 2.0 / N)
            assert abs(f1 - f2) <= 4.0 * se + 1e-12


class TestSingleSimplexUniformity:
    @pytest.mark.parametrize("n,seed", [(2, 70), (3, 71)])
    def test_barycentric_refinement_chi_square(self, n, seed):
        """Barycentric coordinates of uniform simplex samples are uniform
        over the standard simplex; test on a two-level dyadic grid (4 cells
        per axis) with exact cell masses."""
        rng = np.random.Generator(np.random.PCG64(seed))
        verts = rng.standard_normal((n + 1, n)) * 2.0
        S = ps.Simplex(verts)
        P = ps.simplex_halfspaces(S)
        V = ps.enumerate_vertices(P)
        D = ps.triangulate(P, V)
        assert D.size == 1
        batch = ps.dbsop_sample(P, D, 100_000, seed=seed + 1)
        W = ps.barycentric_coordinates(S, batch.points)
        wbatch = ps.SampleBatch(
            points=W,
            simplex_index=np.zeros(len(W), dtype=np.int64),
            seed=batch.seed,
            sampler_id="dbsop",
        )
        report = ps.chi_square_bins(wbatch, ps.standard_simplex(n), grid=4)
        assert report.passed


class TestSampleBatch:
    def test_field_validation(self):
        pts = np.zeros((3, 2))
        idx = np.zeros(3, dtype=np.int64)
        with pytest.raises(ValueError):
            ps.SampleBatch(points=pts, simplex_index=idx, seed=0, sampler_id="other")
        with pytest.raises(ValueError):
            ps.SampleBatch(points=pts, simplex_index=np.zeros(2, dtype=np.int64), seed=0, sampler_id="dbsop")
        with pytest.raises(ValueError):
            ps.SampleBatch(points=pts, simplex_index=idx, seed=-1, sampler_id="dbsop")

    def test_arrays_frozen(self, square):
        P, V, D = square
        batch = ps.dbsop_sample(P, D, 10, seed=0)
        with pytest.raises(ValueError):
            batch.points[0, 0] = 9.9


def test_rng_stream_seed_validation():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(2**64)
    assert RngStream(2**64 - 1).seed == 2**64 - 1
