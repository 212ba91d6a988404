"""Vertex enumeration by exhaustive basis search, plus derived anchors.

Every subset of n constraint rows is solved as a square system; the
nonsingular, feasible, deduplicated solutions are exactly the extreme
points of a bounded feasible set.  Correct and simple at desk scale,
guarded by a combinatorial size limit.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .backend import kernels
from .errors import InconsistentIncidenceError, NotBoundedError, TooLargeError
from .geometry import SINGULARITY_REL_TOL, Polytope, _own_array

# ceiling on C(r, n); above this the walk is refused instead of attempted
DEFAULT_MAX_BASES = 100_000_000

# hard cap on stored vertices, overflow means the input is far outside desk scale
MAX_VERTICES = 262_144

DEFAULT_FEAS_EPS = 1e-8


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Extreme points, rows sorted lexicographically by coordinates."""

    vertices: NDArray[np.float64]
    dedup_eps: float

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", _own_array(self.vertices, ndim=2, name="vertices")
        )

    @property
    def n(self) -> int:
        return self.vertices.shape[1]

    @property
    def count(self) -> int:
        return self.vertices.shape[0]


@dataclass(frozen=True, eq=False)
class FacetIncidence:
    """Per constraint row, the sorted indices of vertices tight on it."""

    tight: tuple[tuple[int, ...], ...]
    eps: float


def dedup_tolerance(P: Polytope) -> float:
    """Merge distance for near-coincident basis solutions."""
    return 1e-8 * (1.0 + float(np.max(np.abs(P.b))))


def enumerate_vertices(
    P: Polytope,
    eps: float = DEFAULT_FEAS_EPS,
    max_bases: int = DEFAULT_MAX_BASES,
) -> VertexSet:
    """All vertices of {x : A x <= b} by combinatorial basis enumeration.

    Solves each of the C(r, n) square subsystems, keeps the feasible
    solutions (slack eps), merges duplicates within
    1e-8 * (1 + max |b|), and returns them sorted lexicographically.
    Raises TooLargeError when C(r, n) exceeds max_bases and
    NotBoundedError when fewer than n + 1 vertices exist, which covers
    empty, lower-dimensional and most unbounded inputs.  Unbounded sets
    that still have n + 1 vertices are not detected, that would need an
    LP.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    n_bases = math.comb(P.r, P.n)
    if n_bases > max_bases:
        raise TooLargeError(
            f"C({P.r}, {P.n}) = {n_bases} basis subsystems exceed the limit "
            f"of {max_bases}; refusing to enumerate"
        )
    dedup = dedup_tolerance(P)
    cap = int(min(MAX_VERTICES, n_bases))
    found, count, status = kernels.enumerate_bases(
        P.A, P.b, eps, dedup, SINGULARITY_REL_TOL, cap
    )
    if status == 1:
        raise TooLargeError(f"more than {MAX_VERTICES} vertices, refusing to continue")
    if count < P.n + 1:
        raise NotBoundedError(
            f"only {count} vertices found; the feasible set is empty, "
            "lower-dimensional or unbounded"
        )
    verts = np.array(found[:count], dtype=np.float64)
    verts += 0.0  # normalize -0.0 so serialized output is stable
    order = np.lexsort(verts.T[::-1])
    return VertexSet(verts[order], dedup)


def interior_point(V: VertexSet) -> NDArray[np.float64]:
    """Coordinate-wise vertex mean; interior for full-dimensional sets."""
    return V.vertices.mean(axis=0)


def bounding_box(V: VertexSet) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Coordinate-wise (min, max) over the vertex set."""
    return V.vertices.min(axis=0), V.vertices.max(axis=0)


def facet_incidence(
    P: Polytope, V: VertexSet, eps: float | None = None
) -> FacetIncidence:
    """For each constraint, which vertices satisfy it with equality.

    eps defaults to the same scale as vertex deduplication.  Raises
    InconsistentIncidenceError when some vertex is tight on fewer than n
    constraints, which signals a tolerance mismatch with the vertex set.
    """
    if eps is None:
        eps = dedup_tolerance(P)
    if V.n != P.n:
        raise ValueError(f"vertex set dimension {V.n} does not match polytope {P.n}")
    resid = np.abs(V.vertices @ P.A.T - P.b)
    tight_mask = resid <= eps
    per_vertex = tight_mask.sum(axis=1)
    if np.any(per_vertex < P.n):
        bad = int(np.argmin(per_vertex))
        raise InconsistentIncidenceError(
            f"vertex {bad} is tight on only {int(per_vertex[bad])} constraints, "
            f"need at least {P.n}; eps = {eps} is likely too small"
        )
    tight = tuple(
        tuple(int(i) for i in np.nonzero(tight_mask[:, j])[0]) for j in range(P.r)
    )
    return FacetIncidence(tight, eps)
