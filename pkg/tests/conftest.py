"""Shared fixtures. Pipeline results are cached per session because
enumeration of the larger families dominates test time."""

import numpy as np
import pytest

import polysample as ps
from polysample import backend


@pytest.fixture(scope="session", autouse=True)
def _warm():
    # JIT cost must land here, not inside a timed or tolerance-sensitive test
    backend.warm_up()


@pytest.fixture(scope="session")
def pipeline():
    """family name, n -> (P, V, D), computed once."""
    cache = {}

    def get(name: str, n: int):
        key = (name, n)
        if key not in cache:
            P = ps.family(name, n)
            V = ps.enumerate_vertices(P)
            D = ps.triangulate(P, V)
            cache[key] = (P, V, D)
        return cache[key]

    return get


@pytest.fixture()
def square(pipeline):
    return pipeline("hypercube", 2)


@pytest.fixture()
def cube3(pipeline):
    return pipeline("hypercube", 3)


@pytest.fixture()
def simplex2(pipeline):
    return pipeline("simplex", 2)


def cofactor_abs_det(M: np.ndarray) -> float:
    """O(n!) cofactor expansion, the independent determinant oracle."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if n == 1:
        return abs(M[0, 0])
    return abs(_cofactor_signed(M))


def _cofactor_signed(M: np.ndarray) -> float:
    n = M.shape[0]
    if n == 1:
        return float(M[0, 0])
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += ((-1.0) ** j) * M[0, j] * _cofactor_signed(minor)
    return total
