"""Backend selection for the inner loops.

POLYSAMPLE_BACKEND picks the implementation at import time:

* ``auto`` (default): compiled loops when numba imports cleanly,
  otherwise the plain numpy build.
* ``numba``: require the compiled loops, fail loudly if unavailable.
* ``numpy``: force the plain build.

Both backends export the same functions and within one backend every
result is deterministic.  Across backends results agree to rounding
noise, which for the samplers means identical seeds can produce point
sets differing at the 1e-12 level.
"""

import os

ENV_BACKEND = "POLYSAMPLE_BACKEND"


def _select():
    choice = os.environ.get(ENV_BACKEND, "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise RuntimeError(
            f"{ENV_BACKEND} must be auto, numba or numpy, got {choice!r}"
        )
    if choice == "numpy":
        from . import _kernels_numpy as mod
        return mod
    if choice == "numba":
        from . import _kernels_numba as mod
        return mod
    try:
        from . import _kernels_numba as mod
    except ImportError:
        from . import _kernels_numpy as mod
    return mod


kernels = _select()

BACKEND = kernels.BACKEND_NAME


def warm_up() -> None:
    """Exercise every kernel once on tiny inputs.

    With the compiled backend this forces jit compilation up front so
    that timed sections never include compiler work.  Harmless and cheap
    on the plain backend.
    """
    import numpy as np

    eye = np.eye(2)
    kernels.gauss_abs_det(eye)
    kernels.abs_dets_batch(eye[None, :, :])
    kernels.barycentric_batch(eye, np.zeros(2), np.full((1, 2), 0.25))
    A = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    b = np.ones(4)
    kernels.enumerate_bases(A, b, 1e-8, 1e-8, 1e-12, 16)
    kernels.unit_simplex_batch(np.full((1, 3), 0.5))
    kernels.categorical_indices(np.array([0.5, 1.0]), np.array([0.3]))
    kernels.map_points(
        np.zeros((1, 2)), eye[None, :, :], np.zeros(1, np.int64), np.full((1, 2), 0.25)
    )
    kernels.hit_and_run_chain(
        A, b, np.zeros(2), np.full((4, 2), 0.5), np.full(4, 0.5), 1, 1, 3, 1e-14
    )
    kernels.containment_mask(A, b, np.zeros((1, 2)), 0.0)
