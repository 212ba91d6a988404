"""Statistical validation of sample batches and summary metrics.

The grid test compares observed cell counts against exact expected
masses: each grid cell is intersected with the polytope by stacking the
box rows onto the constraint system and measuring the piece with the
decomposition pipeline.  No Monte-Carlo reference is involved, so a
failing test points at the sampler, not at the oracle.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DegeneratePolytopeError,
    InsufficientDataError,
    NotBoundedError,
    TooLargeError,
)
from .geometry import Polytope
from .samplers import SampleBatch
from .triangulate import triangulate
from .vertices import bounding_box, enumerate_vertices

# standard normal quantile at 0.999
Z_999 = 3.0902323061678132

MIN_EXPECTED_PER_CELL = 5.0

_MAX_GRID_CELLS = 65_536

_mass_cache: dict = {}


@dataclass(frozen=True)
class ChiSquareReport:
    statistic: float
    dof: int
    critical_value_001: float
    passed: bool


@dataclass(frozen=True, eq=False)
class MomentReport:
    mean: NDArray[np.float64]
    covariance: NDArray[np.float64]


def chi2_critical_001(dof: int) -> float:
    """0.999 quantile of chi-square via the Wilson-Hilferty cube.

    Documented accuracy is for dof >= 10; below that the value runs a
    little tight, which only makes tests stricter.
    """
    if dof < 1:
        raise ValueError("dof must be positive")
    h = 2.0 / (9.0 * dof)
    return dof * (1.0 - h + Z_999 * math.sqrt(h)) ** 3


def _report(statistic: float, dof: int) -> ChiSquareReport:
    crit = chi2_critical_001(dof)
    return ChiSquareReport(
        statistic=float(statistic),
        dof=int(dof),
        critical_value_001=crit,
        passed=bool(statistic < crit),
    )


def _cell_masses(P: Polytope, grid: int):
    """Exact volumes of (cell intersect P) for every grid cell.

    The grid spans the bounding box of P with `grid` bins per axis.
    Returns (lo, width, masses) and caches per (A, b, grid).
    """
    key = (P.A.tobytes(), P.b.tobytes(), int(grid))
    hit = _mass_cache.get(key)
    if hit is not None:
        return hit
    n = P.n
    cells = grid**n
    if cells > _MAX_GRID_CELLS:
        raise TooLargeError(
            f"{grid} bins per axis gives {cells} cells in {n} dimensions; "
            "choose a coarser grid"
        )
    V = enumerate_vertices(P)
    lo, hi = bounding_box(V)
    width = (hi - lo) / grid
    eye = np.eye(n)
    masses = np.zeros(cells)
    for flat, combo in enumerate(itertools.product(range(grid), repeat=n)):
        c = np.asarray(combo, dtype=np.float64)
        cell_lo = lo + c * width
        cell_hi = cell_lo + width
        A_cell = np.vstack([P.A, eye, -eye])
        b_cell = np.concatenate([P.b, cell_hi, -cell_lo])
        try:
            W = enumerate_vertices(Polytope(A_cell, b_cell))
            masses[flat] = triangulate(Polytope(A_cell, b_cell), W).total_volume
        except (NotBoundedError, DegeneratePolytopeError):
            masses[flat] = 0.0
    out = (lo, width, masses)
    _mass_cache[key] = out
    return out


def chi_square_bins(batch: SampleBatch, P: Polytope, grid: int) -> ChiSquareReport:
    """Pearson test of batch uniformity over an axis-aligned grid.

    Expected counts are N times the exact mass fraction of each cell.
    Cells expecting fewer than 5 counts are pooled into one tail cell.
    Raises InsufficientDataError when N < 5 times the number of nonempty
    cells or when pooling leaves fewer than two cells.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2 bins per axis")
    if batch.n != P.n:
        raise ValueError(f"batch dimension {batch.n} does not match polytope {P.n}")
    N = batch.count
    lo, width, masses = _cell_masses(P, grid)
    nonempty = int((masses > 0.0).sum())
    if N < MIN_EXPECTED_PER_CELL * nonempty:
        raise InsufficientDataError(
            f"{N} samples for {nonempty} nonempty cells; need at least "
            f"{int(MIN_EXPECTED_PER_CELL * nonempty)}"
        )
    expected = N * masses / masses.sum()

    axis_idx = np.floor((batch.points - lo) / width).astype(np.int64)
    np.clip(axis_idx, 0, grid - 1, out=axis_idx)
    flat = np.ravel_multi_index(axis_idx.T, (grid,) * P.n)
    observed = np.bincount(flat, minlength=len(masses)).astype(np.float64)

    keep = expected >= MIN_EXPECTED_PER_CELL
    terms = (observed[keep] - expected[keep]) ** 2 / expected[keep]
    statistic = float(terms.sum())
    cells = int(keep.sum())
    tail_e = float(expected[~keep].sum())
    tail_o = float(observed[~keep].sum())
    if tail_e > 0.0:
        statistic += (tail_o - tail_e) ** 2 / tail_e
        cells += 1
    elif tail_o > 0.0:
        statistic = math.inf
    if cells < 2:
        raise InsufficientDataError("pooling left fewer than two cells")
    return _report(statistic, cells - 1)


def chi_square_membership(batch: SampleBatch, D) -> ChiSquareReport:
    """Pearson test of simplex-index frequencies against the weights q."""
    idx = batch.simplex_index
    if np.any(idx < 0):
        raise ValueError("batch has no simplex provenance")
    K = D.size
    if np.any(idx >= K):
        raise ValueError("simplex index out of range for this decomposition")
    observed = np.bincount(idx, minlength=K).astype(np.float64)
    expected = batch.count * D.weights
    statistic = float(((observed - expected) ** 2 / expected).sum())
    return _report(statistic, max(K - 1, 1))


def sc_metric(N: int, n: int) -> float:
    """Samples per sampled dimension, N / n."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if N < 1:
        raise ValueError("sample count must be at least 1")
    return N / n


def moment_report(batch: SampleBatch, P: Polytope | None = None) -> MomentReport:
    """Sample mean and covariance (ddof 1) of a batch."""
    if batch.count < 2:
        raise InsufficientDataError("need at least two samples for moments")
    if P is not None and batch.n != P.n:
        raise ValueError(f"batch dimension {batch.n} does not match polytope {P.n}")
    mean = batch.points.mean(axis=0)
    cov = np.cov(batch.points, rowvar=False, ddof=1).reshape(batch.n, batch.n)
    return MomentReport(mean=mean, covariance=cov)
