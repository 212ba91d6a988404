"""Exact uniform sampling over bounded convex polytopes.

The pipeline is vertex enumeration, simplicial decomposition, then
direct per-simplex sampling via flat Dirichlet weights.  Hit-and-run
and box rejection are included as baselines, along with exact volume
computation, uniformity tests, and a timing harness.
"""

from .analysis import (
    ChiSquareReport,
    MomentReport,
    chi2_critical_001,
    chi_square_bins,
    chi_square_membership,
    moment_report,
    sc_metric,
)
from .backend import BACKEND
from .bench import BenchRecord, compare_samplers, run_bench
from .errors import (
    DegeneratePolytopeError,
    DegenerateSimplexError,
    GeometryError,
    InconsistentIncidenceError,
    InsufficientDataError,
    NotBoundedError,
    NumericalDegeneracyError,
    TooLargeError,
    TooThinPolytopeError,
)
from .families import (
    cross_polytope,
    family,
    hypercube,
    random_polytope,
    standard_simplex,
)
from .geometry import (
    Polytope,
    Simplex,
    abs_determinant,
    barycentric_coordinates,
    contains,
    contains_all,
    float_factorial,
    map_to_simplex,
    simplex_contains,
    simplex_halfspaces,
    simplex_volume,
)
from .samplers import (
    RngStream,
    SampleBatch,
    dbsop_sample,
    dbsop_sample_parallel,
    hit_and_run_sample,
    rejection_sample,
    sample_categorical,
    sample_unit_simplex,
)
from .triangulate import (
    Decomposition,
    polytope_volume,
    triangulate,
    uniform_density_value,
)
from .vertices import (
    FacetIncidence,
    VertexSet,
    bounding_box,
    enumerate_vertices,
    facet_incidence,
    interior_point,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BenchRecord",
    "ChiSquareReport",
    "Decomposition",
    "DegeneratePolytopeError",
    "DegenerateSimplexError",
    "FacetIncidence",
    "GeometryError",
    "InconsistentIncidenceError",
    "InsufficientDataError",
    "MomentReport",
    "NotBoundedError",
    "NumericalDegeneracyError",
    "Polytope",
    "RngStream",
    "SampleBatch",
    "Simplex",
    "TooLargeError",
    "TooThinPolytopeError",
    "VertexSet",
    "abs_determinant",
    "barycentric_coordinates",
    "chi2_critical_001",
    "chi_square_bins",
    "chi_square_membership",
    "compare_samplers",
    "contains",
    "contains_all",
    "cross_polytope",
    "dbsop_sample",
    "dbsop_sample_parallel",
    "enumerate_vertices",
    "facet_incidence",
    "family",
    "float_factorial",
    "hit_and_run_sample",
    "hypercube",
    "interior_point",
    "map_to_simplex",
    "moment_report",
    "polytope_volume",
    "random_polytope",
    "rejection_sample",
    "run_bench",
    "sample_categorical",
    "sample_unit_simplex",
    "sc_metric",
    "simplex_contains",
    "simplex_halfspaces",
    "simplex_volume",
    "standard_simplex",
    "triangulate",
    "uniform_density_value",
    "bounding_box",
    "__version__",
]
