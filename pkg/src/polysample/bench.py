"""Timing harness: per-dimension pipeline benchmarks and a three-way
sampler comparison on a fixed polytope.

Timings use the monotonic clock and the median of three repetitions.
The kernels are warmed up first so compilation never lands inside a
timed section.  Vertex and simplex counts are recorded alongside and
checked for stability across repetitions.
"""

import math
import statistics
import time
from dataclasses import dataclass

from . import io
from .backend import warm_up
from .errors import TooLargeError
from .families import FAMILY_NAMES, family
from .geometry import Polytope
from .samplers import dbsop_sample, hit_and_run_sample, rejection_sample
from .triangulate import triangulate
from .vertices import bounding_box, enumerate_vertices, facet_incidence, interior_point

# dimensions past this exhaust memory through simplex count growth
DEFAULT_DIMENSION_GUARD = 8


def chain_thin(n: int) -> int:
    """Thinning used for the chain sampler in comparisons.

    Successive hit-and-run states decorrelate more slowly as the
    dimension grows; quadratic thinning keeps the emitted batch close
    to independent, so uniformity tests on it are meaningful.  The
    sampler's own default (thin 5) is unchanged.
    """
    return max(5, n * n)

RECORD_HEADER = ["n", "t_seconds", "v", "K", "n_samples", "sampler_id", "seed"]
PHASE_HEADER = [
    "family",
    "n",
    "enum_s",
    "triangulate_s",
    "sample_s",
    "total_s",
    "triangulate_share",
]
COMPARE_HEADER = [
    "sampler",
    "n",
    "n_samples",
    "setup_s",
    "sample_s",
    "per_sample_us",
    "acceptance",
]


@dataclass(frozen=True)
class BenchRecord:
    n: int
    t_seconds: float
    v: int
    K: int
    n_samples: int
    sampler_id: str
    seed: int


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def run_bench(
    family_name: str,
    n_min: int,
    n_max: int,
    n_samples: int,
    seed: int,
    out=None,
    phases_out=None,
    repetitions: int = 3,
    dimension_guard: int = DEFAULT_DIMENSION_GUARD,
):
    """Time the full pipeline per dimension for one polytope family.

    Returns (records, phase_rows).  Each phase row carries the median
    wall time of vertex enumeration, triangulation and sampling, plus
    triangulation's share of the total.  Writes both tables as CSV when
    out/phases_out paths are given.
    """
    if family_name not in FAMILY_NAMES:
        raise ValueError(f"unknown family {family_name!r}, expected {FAMILY_NAMES}")
    if n_min < 1 or n_min > n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    if n_max > dimension_guard:
        raise TooLargeError(
            f"n_max = {n_max} exceeds the dimension guard {dimension_guard}; "
            "simplex counts grow factorially and exhaust memory beyond it"
        )
    if n_samples < 1:
        raise ValueError("need at least one sample")
    warm_up()
    records = []
    phase_rows = []
    for n in range(n_min, n_max + 1):
        P = family(family_name, n)
        reps = []
        v = k = None
        for _ in range(repetitions):
            V, t_enum = _timed(lambda: enumerate_vertices(P))
            D, t_tri = _timed(lambda: triangulate(P, V, facet_incidence(P, V)))
            _, t_sample = _timed(lambda: dbsop_sample(P, D, n_samples, seed))
            if v is None:
                v, k = V.count, D.size
            elif (v, k) != (V.count, D.size):
                raise RuntimeError(
                    f"vertex/simplex counts changed between repetitions at n={n}"
                )
            reps.append((t_enum, t_tri, t_sample))
        t_enum = statistics.median(r[0] for r in reps)
        t_tri = statistics.median(r[1] for r in reps)
        t_sample = statistics.median(r[2] for r in reps)
        total = statistics.median(sum(r) for r in reps)
        records.append(
            BenchRecord(
                n=n,
                t_seconds=total,
                v=v,
                K=k,
                n_samples=n_samples,
                sampler_id="dbsop",
                seed=seed,
            )
        )
        phase_rows.append(
            {
                "family": family_name,
                "n": n,
                "enum_s": t_enum,
                "triangulate_s": t_tri,
                "sample_s": t_sample,
                "total_s": t_enum + t_tri + t_sample,
                "triangulate_share": t_tri / (t_enum + t_tri + t_sample),
            }
        )
    if out is not None:
        save_bench_records(records, out)
    if phases_out is not None:
        save_phase_rows(phase_rows, phases_out)
    return records, phase_rows


def bench_records_csv_text(records) -> str:
    rows = [
        [r.n, r.t_seconds, r.v, r.K, r.n_samples, r.sampler_id, r.seed]
        for r in records
    ]
    return io.csv_text(RECORD_HEADER, rows)


def save_bench_records(records, path) -> None:
    io.save_csv(
        RECORD_HEADER,
        [[r.n, r.t_seconds, r.v, r.K, r.n_samples, r.sampler_id, r.seed] for r in records],
        path,
    )


def load_bench_records(path):
    header, rows = io.load_csv(path)
    if header != RECORD_HEADER:
        raise ValueError(f"{path}: unexpected bench header {header}")
    return [
        BenchRecord(
            n=int(r[0]),
            t_seconds=float(r[1]),
            v=int(r[2]),
            K=int(r[3]),
            n_samples=int(r[4]),
            sampler_id=r[5],
            seed=int(r[6]),
        )
        for r in rows
    ]


def phase_rows_csv_text(phase_rows) -> str:
    rows = [[p[key] for key in PHASE_HEADER] for p in phase_rows]
    return io.csv_text(PHASE_HEADER, rows)


def save_phase_rows(phase_rows, path) -> None:
    io.save_csv(PHASE_HEADER, [[p[key] for key in PHASE_HEADER] for p in phase_rows], path)


def load_phase_rows(path):
    header, rows = io.load_csv(path)
    if header != PHASE_HEADER:
        raise ValueError(f"{path}: unexpected phase header {header}")
    out = []
    for r in rows:
        out.append(
            {
                "family": r[0],
                "n": int(r[1]),
                "enum_s": float(r[2]),
                "triangulate_s": float(r[3]),
                "sample_s": float(r[4]),
                "total_s": float(r[5]),
                "triangulate_share": float(r[6]),
            }
        )
    return out


def compare_samplers(P: Polytope, n_samples: int, seed: int, out=None):
    """Run all three samplers on one polytope and report timings.

    Each sampler is timed end to end: setup covers whatever it needs
    before drawing (enumeration, triangulation, start point or bounding
    box), sample_s the batch itself.  The chain sampler runs with
    chain_thin(n) thinning and its burn-in and thinning are part of its
    sampling time, which is the honest per-sample cost of drawing
    near-independent points from it.  Returns the comparison rows; the
    acceptance column is empty except for rejection sampling.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    warm_up()
    rows = []

    def add(sampler, setup_s, sample_s, acceptance):
        rows.append(
            {
                "sampler": sampler,
                "n": P.n,
                "n_samples": n_samples,
                "setup_s": setup_s,
                "sample_s": sample_s,
                "per_sample_us": sample_s / n_samples * 1e6,
                "acceptance": acceptance,
            }
        )

    def dbsop_setup():
        V = enumerate_vertices(P)
        return triangulate(P, V, facet_incidence(P, V))

    D, setup = _timed(dbsop_setup)
    _, t = _timed(lambda: dbsop_sample(P, D, n_samples, seed))
    add("dbsop", setup, t, None)

    x0, setup = _timed(lambda: interior_point(enumerate_vertices(P)))
    _, t = _timed(
        lambda: hit_and_run_sample(
            P, n_samples, thin=chain_thin(P.n), x0=x0, seed=seed
        )
    )
    add("hitandrun", setup, t, None)

    box, setup = _timed(lambda: bounding_box(enumerate_vertices(P)))
    batch, t = _timed(lambda: rejection_sample(P, box, n_samples, seed))
    add("rejection", setup, t, batch.acceptance_rate)

    if out is not None:
        save_compare_rows(rows, out)
    return rows


def compare_rows_csv_text(rows) -> str:
    return io.csv_text(COMPARE_HEADER, [[r[key] for key in COMPARE_HEADER] for r in rows])


def save_compare_rows(rows, path) -> None:
    io.save_csv(COMPARE_HEADER, [[r[key] for key in COMPARE_HEADER] for r in rows], path)


def load_compare_rows(path):
    header, rows = io.load_csv(path)
    if header != COMPARE_HEADER:
        raise ValueError(f"{path}: unexpected comparison header {header}")
    out = []
    for r in rows:
        out.append(
            {
                "sampler": r[0],
                "n": int(r[1]),
                "n_samples": int(r[2]),
                "setup_s": float(r[3]),
                "sample_s": float(r[4]),
                "per_sample_us": float(r[5]),
                "acceptance": float(r[6]) if r[6] else None,
            }
        )
    return out


def fit_log_linear(records):
    """Least-squares fit of log10(t_seconds) against n.

    Returns (slope, intercept).  Needs at least two records with
    distinct n.
    """
    xs = [r.n for r in records]
    ys = [math.log10(r.t_seconds) for r in records]
    if len(set(xs)) < 2:
        raise ValueError("need records at two or more dimensions to fit")
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


EXTRAPOLATION_HEADER = ["n", "t_seconds_predicted", "basis"]


def extrapolate_records(records, n_values, out=None):
    """Predicted timings from the log-linear fit, clearly labeled as such.

    These are extrapolations of measured growth, not measurements.
    """
    slope, intercept = fit_log_linear(records)
    rows = [
        {
            "n": int(n),
            "t_seconds_predicted": 10.0 ** (slope * n + intercept),
            "basis": "log-linear-extrapolation",
        }
        for n in n_values
    ]
    if out is not None:
        io.save_csv(
            EXTRAPOLATION_HEADER,
            [[r["n"], r["t_seconds_predicted"], r["basis"]] for r in rows],
            out,
        )
    return rows
