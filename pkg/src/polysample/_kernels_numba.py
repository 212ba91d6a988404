"""Compiled backend: the loop bodies jitted with numba.

Importing this module raises ImportError when numba is missing or
refuses to compile, the backend selector then falls back to the plain
build of the same functions.
"""

import numba

from . import _loops

BACKEND_NAME = "numba"

_jit = numba.njit(cache=True, nogil=True)

gauss_abs_det = _jit(_loops.gauss_abs_det)
abs_dets_batch = _jit(_loops.abs_dets_batch)
barycentric_batch = _jit(_loops.barycentric_batch)
enumerate_bases = _jit(_loops.enumerate_bases)
unit_simplex_batch = _jit(_loops.unit_simplex_batch)
categorical_indices = _jit(_loops.categorical_indices)
map_points = _jit(_loops.map_points)
hit_and_run_chain = _jit(_loops.hit_and_run_chain)
containment_mask = _jit(_loops.containment_mask)
