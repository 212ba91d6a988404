"""Simplicial decomposition by recursive boundary coning.

Each face is coned from its lexicographically least vertex onto the
triangulations of its facets that avoid that vertex.  Faces are handled
as vertex subsets (bitmasks over the sorted vertex list); a subset's
dimension is the rank of its vertex differences, so no coordinate
projection is needed and shared faces are triangulated once, memoized.
The result is a pure function of the input.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .backend import kernels
from .errors import DegeneratePolytopeError, InconsistentIncidenceError
from .geometry import Polytope, Simplex, float_factorial
from .vertices import FacetIncidence, VertexSet, facet_incidence

# relative sliver cutoff against the Hadamard bound of the edge matrix
SLIVER_REL_TOL = 1e-12

# rank tolerance for face dimension, matched to the vertex dedup scale
RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Interior-disjoint simplices covering a polytope.

    weights[k] is volumes[k] / total_volume, the probability mass of
    simplex k under the uniform distribution.  vertex_indices keeps the
    provenance of each simplex in the originating vertex set.
    origin_stack/edge_stack hold the per-simplex v0 and V0 arrays in one
    block each for batch mapping.
    """

    simplices: tuple[Simplex, ...]
    volumes: NDArray[np.float64]
    weights: NDArray[np.float64]
    total_volume: float
    dropped_slivers: int
    vertex_indices: NDArray[np.int64]
    origin_stack: NDArray[np.float64]
    edge_stack: NDArray[np.float64]

    def __post_init__(self):
        K = len(self.simplices)
        if K == 0:
            raise DegeneratePolytopeError("a decomposition needs at least one simplex")
        if self.volumes.shape != (K,) or self.weights.shape != (K,):
            raise ValueError("volumes/weights length does not match simplex count")
        if not np.all(self.volumes > 0.0):
            raise ValueError("every stored simplex must have positive volume")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        for name in ("volumes", "weights", "vertex_indices", "origin_stack", "edge_stack"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return len(self.simplices)

    @property
    def n(self) -> int:
        return self.simplices[0].n


def _bit_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Coning:
    """One triangulation run; holds the memo tables."""

    def __init__(self, verts: NDArray[np.float64], constraint_masks: list[int]):
        self.verts = verts
        self.constraint_masks = constraint_masks
        self.rank_cache: dict[int, int] = {}
        self.tri_cache: dict[int, list[tuple[int, ...]]] = {}

    def aff_dim(self, mask: int) -> int:
        hit = self.rank_cache.get(mask)
        if hit is not None:
            return hit
        idx = _bit_indices(mask)
        if len(idx) == 1:
            dim = 0
        else:
            pts = self.verts[idx]
            diffs = pts[1:] - pts[0]
            s = np.linalg.svd(diffs, compute_uv=False)
            dim = int((s > RANK_TOL * (1.0 + s[0])).sum())
        self.rank_cache[mask] = dim
        return dim

    def facets(self, mask: int, dim: int) -> list[int]:
        seen = set()
        for cm in self.constraint_masks:
            g = mask & cm
            if g != mask and g.bit_count() >= dim:
                seen.add(g)
        return [g for g in sorted(seen) if self.aff_dim(g) == dim - 1]

    def tri(self, mask: int, dim: int) -> list[tuple[int, ...]]:
        hit = self.tri_cache.get(mask)
        if hit is not None:
            return hit
        if dim == 0:
            if mask.bit_count() != 1:
                raise InconsistentIncidenceError(
                    "a zero-dimensional face with more than one vertex"
                )
            out = [(mask.bit_length() - 1,)]
        else:
            apex = (mask & -mask).bit_length() - 1
            out = []
            for g in self.facets(mask, dim):
                if (g >> apex) & 1:
                    continue
                for piece in self.tri(g, dim - 1):
                    out.append((apex,) + piece)
            if not out:
                raise InconsistentIncidenceError(
                    "no facet avoiding the apex; the incidence data does not "
                    "describe a bounded full-dimensional face lattice"
                )
        self.tri_cache[mask] = out
        return out


def triangulate(
    P: Polytope, V: VertexSet, inc: FacetIncidence | None = None
) -> Decomposition:
    """Cone the polytope into simplices from lexicographically least vertices.

    Uses only vertices of V (no added points).  Simplices whose edge
    determinant falls below the sliver cutoff are dropped and counted in
    dropped_slivers.
    """
    if V.n != P.n:
        raise ValueError(f"vertex set dimension {V.n} does not match polytope {P.n}")
    if inc is None:
        inc = facet_incidence(P, V)
    if len(inc.tight) != P.r:
        raise InconsistentIncidenceError(
            f"incidence has {len(inc.tight)} rows for {P.r} constraints"
        )
    n = P.n
    m = V.count
    masks = []
    for rows in inc.tight:
        g = 0
        for i in rows:
            if not 0 <= i < m:
                raise InconsistentIncidenceError(f"vertex index {i} out of range")
            g |= 1 << i
        masks.append(g)
    runner = _Coning(V.vertices, masks)
    full = (1 << m) - 1
    if runner.aff_dim(full) < n:
        raise DegeneratePolytopeError(
            "vertices span less than the ambient dimension, the set has no volume"
        )
    pieces = runner.tri(full, n)

    idx = np.array(pieces, dtype=np.int64)
    sim_verts = V.vertices[idx]  # (K, n+1, n)
    edges = np.ascontiguousarray(np.swapaxes(sim_verts[:, 1:, :] - sim_verts[:, :1, :], 1, 2))
    dets = np.asarray(kernels.abs_dets_batch(edges))
    hadamard = np.linalg.norm(edges, axis=1).prod(axis=1)
    keep = dets > SLIVER_REL_TOL * hadamard
    dropped = int(len(pieces) - keep.sum())
    if not keep.any():
        raise DegeneratePolytopeError(
            "every candidate simplex was a sliver; the polytope has no volume "
            "at working precision"
        )
    idx = idx[keep]
    sim_verts = sim_verts[keep]
    edges = edges[keep]
    dets = dets[keep]
    fact = float_factorial(n)
    volumes = dets / fact
    total = math.fsum(volumes)
    weights = volumes / total
    simplices = tuple(
        Simplex(sim_verts[k], abs_det=float(dets[k])) for k in range(len(dets))
    )
    return Decomposition(
        simplices=simplices,
        volumes=volumes,
        weights=weights,
        total_volume=total,
        dropped_slivers=dropped,
        vertex_indices=idx,
        origin_stack=np.ascontiguousarray(sim_verts[:, 0, :]),
        edge_stack=edges,
    )


def polytope_volume(D: Decomposition) -> float:
    """Total volume of the decomposition (compensated sum of parts)."""
    return D.total_volume


def uniform_density_value(D: Decomposition) -> float:
    """Constant density of the uniform distribution over the polytope.

    Equal to n! / sum_j |det V0_j|, which is exactly 1 / total_volume.
    """
    return 1.0 / D.total_volume
