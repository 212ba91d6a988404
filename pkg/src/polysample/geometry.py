"""Polytope and simplex primitives: containment, determinants, volumes,
and the affine barycentric map.

Everything works in double precision.  The singularity rule for pivots
is shared with the backends: a pivot smaller than 1e-12 times the
largest entry magnitude of the matrix counts as zero.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .backend import kernels
from .errors import DegenerateSimplexError

SINGULARITY_REL_TOL = 1e-12

# slack allowed when checking that a weight vector lies in the unit simplex
BARYCENTRIC_TOL = 1e-12


def _own_array(a, dtype=np.float64, ndim=None, name="array"):
    out = np.array(a, dtype=dtype, order="C", copy=True)
    if ndim is not None and out.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite entries")
    out.setflags(write=False)
    return out


def float_factorial(n: int) -> float:
    """n! as a float, built by iterative product (exact for n <= 18)."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out


def abs_determinant(M) -> float:
    """|det M| via elimination with partial pivoting.

    Returns exactly 0.0 when a pivot falls below the singularity
    tolerance.  Raises ValueError for non-square or non-finite input.
    """
    M = _own_array(M, ndim=2, name="matrix")
    if M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"matrix must be square and nonempty, got shape {M.shape}")
    return float(kernels.gauss_abs_det(np.ascontiguousarray(M)))


@dataclass(frozen=True, eq=False)
class Polytope:
    """Feasible set {p : A p <= b} with r constraints in n dimensions."""

    A: NDArray[np.float64]
    b: NDArray[np.float64]

    def __post_init__(self):
        A = _own_array(self.A, ndim=2, name="A")
        b = _own_array(self.b, ndim=1, name="b")
        r, n = A.shape
        if n < 1:
            raise ValueError("dimension must be at least 1")
        if b.shape[0] != r:
            raise ValueError(f"b has {b.shape[0]} entries for {r} constraint rows")
        if r < n + 1:
            raise ValueError(
                f"{r} constraints cannot bound a full-dimensional set in {n} dimensions"
            )
        row_norm = np.abs(A).max(axis=1)
        if np.any(row_norm == 0.0):
            raise ValueError("constraint matrix has an all-zero row")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def r(self) -> int:
        return self.A.shape[0]


def contains(P: Polytope, p, eps: float = 0.0) -> bool:
    """True iff A_i p <= b_i + eps for every constraint row."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (P.n,):
        raise ValueError(f"point has shape {p.shape}, expected ({P.n},)")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    mask = kernels.containment_mask(P.A, P.b, np.ascontiguousarray(p[None, :]), eps)
    return bool(mask[0])


def contains_all(P: Polytope, pts, eps: float = 0.0) -> NDArray[np.bool_]:
    """Row-wise containment mask for a batch of points."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != P.n:
        raise ValueError(f"points have shape {pts.shape}, expected (m, {P.n})")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return np.asarray(kernels.containment_mask(P.A, P.b, pts, eps))


@dataclass(frozen=True, eq=False)
class Simplex:
    """n+1 affinely independent vertices, with the edge matrix cached.

    vertices[0] is the map origin; edge_matrix column i holds
    vertices[i+1] - vertices[0].  abs_det may be supplied by callers
    that already computed it in a batch, otherwise it is derived here.
    Affinely dependent vertices are rejected at construction.
    """

    vertices: NDArray[np.float64]
    abs_det: float = field(default=0.0)
    edge_matrix: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self):
        verts = _own_array(self.vertices, ndim=2, name="vertices")
        m, n = verts.shape
        if m != n + 1 or n < 1:
            raise ValueError(
                f"a simplex in {n} dimensions needs {n + 1} vertices, got {m}"
            )
        edge = np.ascontiguousarray((verts[1:] - verts[0]).T)
        det = self.abs_det
        if det == 0.0:
            det = float(kernels.gauss_abs_det(edge))
        if det <= 0.0:
            raise DegenerateSimplexError(
                "simplex vertices are affinely dependent within tolerance"
            )
        edge.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edge_matrix", edge)
        object.__setattr__(self, "abs_det", det)

    @property
    def n(self) -> int:
        return self.vertices.shape[1]


def simplex_volume(S: Simplex) -> float:
    """|det V0| / n! from the cached determinant."""
    if S.abs_det <= 0.0:
        raise DegenerateSimplexError("degenerate simplex has no volume")
    return S.abs_det / float_factorial(S.n)


def map_to_simplex(S: Simplex, w) -> NDArray[np.float64]:
    """Affine image v0 + V0 w of a unit-simplex weight vector."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (S.n,):
        raise ValueError(f"weights have shape {w.shape}, expected ({S.n},)")
    if np.any(w < -BARYCENTRIC_TOL) or w.sum() > 1.0 + BARYCENTRIC_TOL:
        raise ValueError("weights lie outside the unit simplex beyond tolerance")
    return S.vertices[0] + S.edge_matrix @ w


def barycentric_coordinates(S: Simplex, pts) -> NDArray[np.float64]:
    """Solve V0 a = p - v0 for one point (n,) or a batch (m, n)."""
    pts = np.asarray(pts, dtype=np.float64)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != S.n:
        raise ValueError(f"points have shape {pts.shape}, expected (m, {S.n})")
    coords = np.asarray(
        kernels.barycentric_batch(
            S.edge_matrix, S.vertices[0], np.ascontiguousarray(pts)
        )
    )
    return coords[0] if single else coords


def simplex_contains(S: Simplex, pts, eps: float = 0.0):
    """Membership test by barycentric coordinates.

    A point is inside when every coordinate is >= -eps and their sum is
    <= 1 + eps.  Pass a negative eps to demand strict interiority by
    that margin.  Returns a bool for one point, a mask for a batch.
    """
    pts = np.asarray(pts, dtype=np.float64)
    single = pts.ndim == 1
    coords = barycentric_coordinates(S, pts)
    if single:
        coords = coords[None, :]
    ok = (coords >= -eps).all(axis=1) & (coords.sum(axis=1) <= 1.0 + eps)
    return bool(ok[0]) if single else ok


def simplex_halfspaces(S: Simplex) -> Polytope:
    """The n+1 bounding halfspaces of a simplex as a Polytope.

    Built from the inverse edge matrix: the barycentric coordinates are
    affine in p, and the simplex is exactly where all of them and their
    complement are nonnegative.  Rows are scaled to unit norm.
    """
    inv = np.linalg.inv(S.edge_matrix)
    v0 = S.vertices[0]
    A = np.empty((S.n + 1, S.n))
    b = np.empty(S.n + 1)
    A[: S.n] = -inv
    b[: S.n] = -inv @ v0
    s = inv.sum(axis=0)
    A[S.n] = s
    b[S.n] = 1.0 + s @ v0
    norms = np.linalg.norm(A, axis=1)
    return Polytope(A / norms[:, None], b / norms)
