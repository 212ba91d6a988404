"""Exception types raised by the geometry and sampling pipeline.

Everything here derives from GeometryError so callers can catch one type
for "the input was a legal argument but the computation cannot proceed".
Plain ValueError is reserved for malformed arguments (wrong shape, NaN,
out-of-range parameters).
"""


class GeometryError(Exception):
    """Base class for geometric and numerical failures."""


class NotBoundedError(GeometryError):
    """The constraint system has no bounded full-dimensional solution set."""


class TooLargeError(GeometryError):
    """The requested computation exceeds a configured size guard."""


class DegenerateSimplexError(GeometryError):
    """Simplex vertices are affinely dependent within tolerance."""


class DegeneratePolytopeError(GeometryError):
    """The feasible set has zero volume, no simplex survived."""


class InconsistentIncidenceError(GeometryError):
    """Vertex/facet incidence does not describe a valid face lattice."""


class NumericalDegeneracyError(GeometryError):
    """A chord or pivot collapsed below the resolvable length scale."""


class TooThinPolytopeError(GeometryError):
    """Rejection acceptance rate fell below the practical floor."""


class InsufficientDataError(GeometryError):
    """Not enough samples for the requested statistical test."""
