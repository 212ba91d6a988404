"""Constraint systems for the standard test families and random instances."""

import itertools

import numpy as np

from .geometry import Polytope

FAMILY_NAMES = ("hypercube", "simplex", "crosspolytope")


def hypercube(n: int) -> Polytope:
    """[0, 1]^n as 2n halfspaces."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    eye = np.eye(n)
    A = np.vstack([eye, -eye])
    b = np.concatenate([np.ones(n), np.zeros(n)])
    return Polytope(A, b)


def standard_simplex(n: int) -> Polytope:
    """{x_i >= 0, sum x <= 1}, volume 1/n!."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    A = np.vstack([-np.eye(n), np.ones((1, n))])
    b = np.concatenate([np.zeros(n), [1.0]])
    return Polytope(A, b)


def cross_polytope(n: int) -> Polytope:
    """{sum |x_i| <= 1} as the 2^n sign-pattern halfspaces, volume 2^n/n!."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    A = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    b = np.ones(2**n)
    return Polytope(A, b)


def family(name: str, n: int) -> Polytope:
    """Dispatch by family name: hypercube, simplex or crosspolytope."""
    if name == "hypercube":
        return hypercube(n)
    if name == "simplex":
        return standard_simplex(n)
    if name == "crosspolytope":
        return cross_polytope(n)
    raise ValueError(f"unknown family {name!r}, expected one of {FAMILY_NAMES}")


def random_polytope(n: int, seed: int, n_cuts: int | None = None) -> Polytope:
    """A random bounded full-dimensional instance.

    Random unit normals with offsets in [0.8, 1.5] cut a box of radius 3,
    so the result is always bounded with the origin strictly interior.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if n_cuts is None:
        n_cuts = 3 * n
    rng = np.random.Generator(np.random.PCG64(seed))
    normals = rng.standard_normal((n_cuts, n))
    norms = np.linalg.norm(normals, axis=1)
    # a zero draw has probability zero; regenerate any degenerate row anyway
    while np.any(norms == 0.0):
        bad = norms == 0.0
        normals[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(normals, axis=1)
    normals /= norms[:, None]
    offsets = 0.8 + 0.7 * rng.random(n_cuts)
    eye = np.eye(n)
    A = np.vstack([normals, eye, -eye])
    b = np.concatenate([offsets, np.full(2 * n, 3.0)])
    return Polytope(A, b)
