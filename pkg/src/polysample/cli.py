"""Command-line surface.

Data goes to stdout or the --out file, diagnostics to stderr.  Exit
codes: 0 success, 1 usage (bad flags, missing files), 2 geometry or
numerical failure (including malformed data files).
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .analysis import chi_square_bins
from .bench import (
    bench_records_csv_text,
    compare_rows_csv_text,
    compare_samplers,
    phase_rows_csv_text,
    run_bench,
)
from .errors import GeometryError
from .geometry import Polytope, Simplex, simplex_halfspaces
from .samplers import (
    ENV_THREADS,
    dbsop_sample,
    dbsop_sample_parallel,
    hit_and_run_sample,
    rejection_sample,
)
from .triangulate import triangulate
from .vertices import bounding_box, enumerate_vertices, facet_incidence


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="polysample",
        description="Uniform sampling over bounded convex polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_in=True):
        if with_in:
            p.add_argument("--in", dest="infile", required=True, metavar="FILE",
                           help="input polytope JSON")
        p.add_argument("--out", dest="outfile", metavar="FILE",
                       help="output file (default: stdout)")

    p = sub.add_parser("vertices", help="enumerate the vertex set")
    add_common(p)
    p.set_defaults(func=_cmd_vertices)

    p = sub.add_parser("triangulate", help="decompose into simplices")
    add_common(p)
    p.set_defaults(func=_cmd_triangulate)

    p = sub.add_parser("volume", help="exact volume via decomposition")
    add_common(p)
    p.set_defaults(func=_cmd_volume)

    p = sub.add_parser("sample", help="draw uniform samples")
    add_common(p)
    p.add_argument("--n-samples", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--sampler", choices=("dbsop", "hitandrun", "rejection"),
                   default="dbsop")
    p.add_argument("--grid", type=_positive, default=None,
                   help="report a uniformity test on this grid to stderr")
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--thin", type=_positive, default=5)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("bench", help="time the pipeline per dimension")
    add_common(p, with_in=False)
    p.add_argument("--family", required=True,
                   choices=("hypercube", "simplex", "crosspolytope"))
    p.add_argument("--n-min", type=_positive, default=2)
    p.add_argument("--n-max", type=_positive, default=6)
    p.add_argument("--n-samples", type=_positive, default=10000)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("compare", help="time all three samplers on one polytope")
    add_common(p)
    p.add_argument("--n-samples", type=_positive, default=10000)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=_cmd_compare)

    return parser


def _load_hrep(path) -> Polytope:
    obj = io.load_polytope(path)
    if isinstance(obj, Polytope):
        return obj
    if obj.count == obj.n + 1:
        return simplex_halfspaces(Simplex(obj.vertices))
    raise ValueError(
        f"{path}: vertex input with {obj.count} points; only a simplex "
        "(n+1 vertices) converts to constraints here, provide A and b"
    )


def _emit(outfile, text: str) -> None:
    if outfile:
        io.write_text(outfile, text)
    else:
        sys.stdout.write(text)


def _cmd_vertices(args) -> int:
    P = _load_hrep(args.infile)
    V = enumerate_vertices(P)
    _emit(args.outfile, io.vertices_json_text(V))
    return 0


def _cmd_triangulate(args) -> int:
    P = _load_hrep(args.infile)
    V = enumerate_vertices(P)
    D = triangulate(P, V, facet_incidence(P, V))
    _emit(args.outfile, io.decomposition_json_text(D))
    return 0


def _cmd_volume(args) -> int:
    P = _load_hrep(args.infile)
    V = enumerate_vertices(P)
    D = triangulate(P, V, facet_incidence(P, V))
    _emit(args.outfile, repr(D.total_volume) + "\n")
    return 0


def _cmd_sample(args) -> int:
    P = _load_hrep(args.infile)
    if args.burn_in < 0:
        raise ValueError("burn-in must be nonnegative")
    if args.sampler == "dbsop":
        V = enumerate_vertices(P)
        D = triangulate(P, V, facet_incidence(P, V))
        if os.environ.get(ENV_THREADS):
            batch = dbsop_sample_parallel(P, D, args.n_samples, args.seed)
        else:
            batch = dbsop_sample(P, D, args.n_samples, args.seed)
    elif args.sampler == "hitandrun":
        batch = hit_and_run_sample(
            P, args.n_samples, burn_in=args.burn_in, thin=args.thin, seed=args.seed
        )
    else:
        box = bounding_box(enumerate_vertices(P))
        batch = rejection_sample(P, box, args.n_samples, args.seed)
    _emit(args.outfile, io.samples_csv_text(batch))
    if batch.acceptance_rate is not None:
        print(f"acceptance rate: {batch.acceptance_rate:.6g}", file=sys.stderr)
    if args.grid is not None:
        rep = chi_square_bins(batch, P, args.grid)
        print(
            f"uniformity on a {args.grid}^{P.n} grid: statistic={rep.statistic:.4f} "
            f"dof={rep.dof} critical={rep.critical_value_001:.4f} passed={rep.passed}",
            file=sys.stderr,
        )
    return 0


def _cmd_bench(args) -> int:
    records, phases = run_bench(
        args.family, args.n_min, args.n_max, args.n_samples, args.seed
    )
    if args.outfile:
        out = Path(args.outfile)
        io.write_text(out, bench_records_csv_text(records))
        suffix = out.suffix or ".csv"
        io.write_text(out.with_name(out.stem + ".phases" + suffix),
                      phase_rows_csv_text(phases))
    else:
        sys.stdout.write(bench_records_csv_text(records))
        sys.stderr.write(phase_rows_csv_text(phases))
    return 0


def _cmd_compare(args) -> int:
    P = _load_hrep(args.infile)
    rows = compare_samplers(P, args.n_samples, args.seed)
    _emit(args.outfile, compare_rows_csv_text(rows))
    return 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help lands here
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GeometryError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
