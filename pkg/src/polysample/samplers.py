"""Uniform samplers over polytopes behind one batch interface.

The decomposition sampler draws a flat-Dirichlet weight vector, picks a
simplex by its volume weight, and maps the weights affinely, which is
exact uniformity with no rejection and no mixing time.  Hit-and-run and
rejection sampling are the baselines.

Randomness comes from numpy's PCG64 generator seeded with a 64-bit
integer; the algorithm choice is a constant of this build, and the
determinism contract (same seed, same bytes) holds per backend.  The
decomposition sampler consumes its stream in a fixed order: all N x
(n+1) exponentials first (row-major), then N uniforms for the simplex
choice.  The chain sampler consumes (burn_in + N * thin) x n normals,
then as many uniforms.  Rejection consumes box proposals batch by
batch, N * n uniforms at a time per batch size.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .backend import kernels
from .errors import (
    NotBoundedError,
    NumericalDegeneracyError,
    TooThinPolytopeError,
)
from .geometry import Polytope, contains
from .triangulate import Decomposition
from .vertices import enumerate_vertices, interior_point

ENV_THREADS = "POLYSAMPLE_THREADS"

MIN_CHORD = 1e-14

# rejection gives up when the rate is this low after this many proposals
MIN_ACCEPTANCE = 1e-9
MAX_PROPOSALS_BEFORE_GIVEUP = 10_000_000

_FIRST_BATCH_CAP = 65_536
_BATCH_CAP = 262_144


class RngStream:
    """Seeded deterministic variate source (PCG64 under the hood)."""

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, size=None):
        return self._gen.random(size)

    def normals(self, shape):
        return self._gen.standard_normal(shape)

    def exponentials(self, shape):
        return self._gen.standard_exponential(shape)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """N points with provenance.

    simplex_index[i] is the decomposition member that produced point i,
    or -1 for samplers without simplex provenance.  acceptance_rate is
    only set by rejection sampling.
    """

    points: NDArray[np.float64]
    simplex_index: NDArray[np.int64]
    seed: int
    sampler_id: str
    acceptance_rate: float | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        idx = np.ascontiguousarray(self.simplex_index, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a nonempty (N, n) matrix")
        if idx.shape != (pts.shape[0],):
            raise ValueError("simplex_index length must match the point count")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite entries")
        if self.sampler_id not in ("dbsop", "hitandrun", "rejection"):
            raise ValueError(f"unknown sampler_id {self.sampler_id!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        pts.setflags(write=False)
        idx.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "simplex_index", idx)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def count(self) -> int:
        return self.points.shape[0]


def sample_unit_simplex(rng: RngStream, n: int) -> NDArray[np.float64]:
    """One weight vector uniform on {w_i >= 0, sum w <= 1}.

    Drawn as n+1 standard exponentials e_0..e_n normalized by their
    sum, keeping components 1..n.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    E = rng.exponentials((1, n + 1))
    return np.asarray(kernels.unit_simplex_batch(E))[0]


def _unit_simplex_batch(rng: RngStream, n: int, count: int) -> NDArray[np.float64]:
    E = rng.exponentials((count, n + 1))
    return np.asarray(kernels.unit_simplex_batch(E))


def _checked_cdf(q) -> NDArray[np.float64]:
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] < 1:
        raise ValueError("q must be a nonempty probability vector")
    if np.any(q <= 0.0):
        raise ValueError("category weights must be strictly positive")
    cdf = np.cumsum(q)
    if abs(cdf[-1] - 1.0) > 1e-9:
        raise ValueError(f"category weights sum to {cdf[-1]}, expected 1")
    return cdf


def sample_categorical(rng: RngStream, q) -> int:
    """Index k with probability q_k via cumulative table + binary search."""
    cdf = _checked_cdf(q)
    u = np.asarray([rng.uniform()])
    return int(np.asarray(kernels.categorical_indices(cdf, u))[0])


def dbsop_sample(P: Polytope, D: Decomposition, N: int, seed: int) -> SampleBatch:
    """Exact uniform batch over P through its decomposition.

    Per sample: flat-Dirichlet weights, a volume-weighted simplex pick,
    and the affine map of the weights into that simplex.  Deterministic
    per seed.
    """
    if N < 1:
        raise ValueError("need at least one sample")
    if D.n != P.n:
        raise ValueError(f"decomposition dimension {D.n} does not match polytope {P.n}")
    rng = RngStream(seed)
    W = _unit_simplex_batch(rng, P.n, N)
    cdf = _checked_cdf(D.weights)
    u = np.ascontiguousarray(rng.uniform(N))
    idx = np.asarray(kernels.categorical_indices(cdf, u))
    pts = np.asarray(kernels.map_points(D.origin_stack, D.edge_stack, idx, W))
    return SampleBatch(points=pts, simplex_index=idx, seed=rng.seed, sampler_id="dbsop")


def _resolve_threads(n_threads: int | None) -> int:
    cap = os.cpu_count() or 1
    env = os.environ.get(ENV_THREADS)
    if env is not None:
        try:
            cap = min(cap, int(env))
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be an integer, got {env!r}")
    want = cap if n_threads is None else int(n_threads)
    return max(1, min(want, cap))


def dbsop_sample_parallel(
    P: Polytope, D: Decomposition, N: int, seed: int, n_threads: int | None = None
) -> SampleBatch:
    """Split the batch across threads, one child stream each.

    Thread t draws its chunk with seed + t; chunks are concatenated in
    thread order, so the output is a pure function of (input, seed,
    thread count).  POLYSAMPLE_THREADS caps the thread count.
    """
    if N < 1:
        raise ValueError("need at least one sample")
    T = min(_resolve_threads(n_threads), N)
    if T == 1:
        return dbsop_sample(P, D, N, seed)
    base, rem = divmod(N, T)
    sizes = [base + (1 if t < rem else 0) for t in range(T)]

    def job(t: int) -> SampleBatch:
        return dbsop_sample(P, D, sizes[t], (seed + t) % 2**64)

    with ThreadPoolExecutor(max_workers=T) as pool:
        parts = list(pool.map(job, range(T)))
    return SampleBatch(
        points=np.concatenate([p.points for p in parts], axis=0),
        simplex_index=np.concatenate([p.simplex_index for p in parts]),
        seed=int(seed),
        sampler_id="dbsop",
    )


def hit_and_run_sample(
    P: Polytope,
    N: int,
    burn_in: int = 1000,
    thin: int = 5,
    x0=None,
    seed: int = 0,
) -> SampleBatch:
    """Classic hit-and-run chain over P.

    Each step picks a uniform direction on the unit sphere, finds the
    feasible chord through the current point by a per-constraint ratio
    test, and jumps to a uniform position on it.  Every thin-th state
    after burn_in is emitted.  x0 defaults to the vertex centroid, which
    costs a vertex enumeration.
    """
    if N < 1:
        raise ValueError("need at least one sample")
    if burn_in < 0 or thin < 1:
        raise ValueError("burn_in must be >= 0 and thin >= 1")
    if x0 is None:
        x0 = interior_point(enumerate_vertices(P))
    x0 = np.ascontiguousarray(x0, dtype=np.float64)
    if x0.shape != (P.n,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({P.n},)")
    if not contains(P, x0, 0.0):
        raise ValueError("x0 is not a feasible start point")
    rng = RngStream(seed)
    T = burn_in + N * thin
    gauss = rng.normals((T, P.n))
    u = rng.uniform(T)
    pts, m, status = kernels.hit_and_run_chain(
        P.A, P.b, x0, gauss, u, burn_in, thin, N, MIN_CHORD
    )
    if status == 2:
        raise NotBoundedError("unbounded chord; the feasible set is not bounded")
    if status == 1:
        raise NumericalDegeneracyError(
            f"chord shorter than {MIN_CHORD}; the set is numerically degenerate"
        )
    pts = np.asarray(pts)[:m]
    if m != N:
        raise NumericalDegeneracyError(f"chain emitted {m} of {N} requested states")
    return SampleBatch(
        points=pts,
        simplex_index=np.full(N, -1, dtype=np.int64),
        seed=rng.seed,
        sampler_id="hitandrun",
    )


def rejection_sample(P: Polytope, box, N: int, seed: int) -> SampleBatch:
    """Uniform proposals in a covering box, keep the feasible ones.

    box is a (lower, upper) pair that must cover P.  Batch sizes follow
    a deterministic schedule driven by the running acceptance estimate,
    so results depend only on (input, seed).  Gives up when the rate
    stays below 1e-9 after ten million proposals.
    """
    if N < 1:
        raise ValueError("need at least one sample")
    lo = np.ascontiguousarray(box[0], dtype=np.float64)
    hi = np.ascontiguousarray(box[1], dtype=np.float64)
    if lo.shape != (P.n,) or hi.shape != (P.n,):
        raise ValueError(f"box bounds must have shape ({P.n},)")
    if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
        raise ValueError("box bounds must be finite")
    if np.any(hi <= lo):
        raise ValueError("box upper bounds must exceed lower bounds")
    width = hi - lo
    rng = RngStream(seed)
    kept: list[NDArray[np.float64]] = []
    n_kept = 0
    proposed = 0
    accepted = 0
    batch = min(max(1024, N), _FIRST_BATCH_CAP)
    while n_kept < N:
        draws = lo + rng.uniform((batch, P.n)) * width
        mask = np.asarray(kernels.containment_mask(P.A, P.b, draws, 0.0))
        good = draws[mask]
        proposed += batch
        accepted += good.shape[0]
        if good.shape[0]:
            kept.append(good)
            n_kept += good.shape[0]
        if n_kept >= N:
            break
        rate = accepted / proposed
        if proposed >= MAX_PROPOSALS_BEFORE_GIVEUP and rate < MIN_ACCEPTANCE:
            raise TooThinPolytopeError(
                f"acceptance rate {rate:.3g} after {proposed} proposals; "
                "the polytope is too thin for box rejection"
            )
        need = N - n_kept
        batch = int(min(max(1024, need / max(rate, MIN_ACCEPTANCE) * 1.1 + 64), _BATCH_CAP))
    pts = np.concatenate(kept, axis=0)[:N]
    return SampleBatch(
        points=np.ascontiguousarray(pts),
        simplex_index=np.full(N, -1, dtype=np.int64),
        seed=rng.seed,
        sampler_id="rejection",
        acceptance_rate=accepted / proposed,
    )
