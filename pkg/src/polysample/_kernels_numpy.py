"""Plain backend: vectorized builds of the loop bodies.

Matches the compiled backend function for function.  Results agree with
the compiled twins to rounding noise; within one backend every function
is exactly deterministic.  The basis walk here trades the compiled
scalar loop for chunked batch elimination, which is considerably slower
on very large instances but needs nothing beyond numpy.
"""

import itertools
import math

import numpy as np

from . import _loops

BACKEND_NAME = "numpy"

gauss_abs_det = _loops.gauss_abs_det

_CHUNK = 131072


def abs_dets_batch(mats):
    """|det| of a (B, n, n) stack, pivot rule as in gauss_abs_det."""
    B, n, _ = mats.shape
    U = np.array(mats, dtype=np.float64, copy=True)
    tol = 1e-12 * np.abs(U).reshape(B, -1).max(axis=1)
    det = np.ones(B)
    alive = np.ones(B, bool)
    ar = np.arange(B)
    for k in range(n):
        piv = k + np.abs(U[:, k:, k]).argmax(axis=1)
        best = np.abs(U[ar, piv, k])
        alive &= best > tol
        swap = piv != k
        if swap.any():
            i = ar[swap]
            p = piv[swap]
            tmp = U[i, k, :].copy()
            U[i, k, :] = U[i, p, :]
            U[i, p, :] = tmp
        pivval = np.where(alive, U[:, k, k], 1.0)
        det *= np.where(alive, np.abs(pivval), 1.0)
        if k < n - 1:
            f = U[:, k + 1:, k] / pivval[:, None]
            U[:, k + 1:, k + 1:] -= f[:, :, None] * U[:, k, k + 1:][:, None, :]
    det[~alive] = 0.0
    return det


def _solve_batch(mats, rhs, sing_tol):
    # returns (x, ok); singular members get ok False and garbage x
    B, n, _ = mats.shape
    U = np.array(mats, dtype=np.float64, copy=True)
    y = np.array(rhs, dtype=np.float64, copy=True)
    tol = sing_tol * np.abs(U).reshape(B, -1).max(axis=1)
    ok = np.ones(B, bool)
    ar = np.arange(B)
    for k in range(n):
        piv = k + np.abs(U[:, k:, k]).argmax(axis=1)
        best = np.abs(U[ar, piv, k])
        ok &= best > tol
        swap = piv != k
        if swap.any():
            i = ar[swap]
            p = piv[swap]
            tmp = U[i, k, :].copy()
            U[i, k, :] = U[i, p, :]
            U[i, p, :] = tmp
            tmp = y[i, k].copy()
            y[i, k] = y[i, p]
            y[i, p] = tmp
        pivval = np.where(ok, U[:, k, k], 1.0)
        if k < n - 1:
            f = U[:, k + 1:, k] / pivval[:, None]
            y[:, k + 1:] -= f * y[:, k][:, None]
            U[:, k + 1:, k + 1:] -= f[:, :, None] * U[:, k, k + 1:][:, None, :]
    x = np.empty_like(y)
    for i in range(n - 1, -1, -1):
        acc = y[:, i].copy()
        if i < n - 1:
            acc -= (U[:, i, i + 1:] * x[:, i + 1:]).sum(axis=1)
        x[:, i] = acc / np.where(ok, U[:, i, i], 1.0)
    return x, ok


def barycentric_batch(V0, v0, pts):
    """Coordinates a with V0 a = p - v0 for each row p of pts."""
    return np.linalg.solve(V0, (pts - v0).T).T


def enumerate_bases(A, b, feas_eps, dedup_eps, sing_tol, max_found):
    """Chunked batch version of the basis walk.

    Candidate points landing in the same dedup_eps rounding cell are
    collapsed before the exact distance check, which can merge points up
    to sqrt(n) * dedup_eps apart.  Real vertex sets are separated by far
    more than that.
    """
    r, n = A.shape
    total = math.comb(r, n)
    found = np.empty((max_found, n), np.float64)
    n_found = 0
    status = 0
    it = itertools.combinations(range(r), n)
    dedup2 = dedup_eps * dedup_eps
    b_relaxed = b + feas_eps
    remaining = total
    while remaining > 0 and status == 0:
        take = min(_CHUNK, remaining)
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, take)),
            dtype=np.int64,
            count=take * n,
        )
        idx = flat.reshape(take, n)
        remaining -= take
        x, ok = _solve_batch(A[idx], b[idx], sing_tol)
        x = x[ok]
        if x.shape[0] == 0:
            continue
        with np.errstate(invalid="ignore"):
            feas = (x @ A.T <= b_relaxed[None, :]).all(axis=1)
        x = x[feas]
        if x.shape[0] == 0:
            continue
        keys = np.round(x / dedup_eps)
        _, first = np.unique(keys, axis=0, return_index=True)
        for row in x[np.sort(first)]:
            dup = False
            for t in range(n_found):
                delta = found[t] - row
                if float(delta @ delta) <= dedup2:
                    dup = True
                    break
            if not dup:
                if n_found >= max_found:
                    status = 1
                    break
                found[n_found] = row
                n_found += 1
    return found, n_found, status


def unit_simplex_batch(E):
    """Map exponential draws (N, n+1) to flat-Dirichlet weights (N, n)."""
    return E[:, 1:] / E.sum(axis=1)[:, None]


def categorical_indices(cdf, u):
    """Smallest k with u < cdf[k], clamped to the last cell."""
    hi = cdf.shape[0] - 1
    return np.minimum(np.searchsorted(cdf, u, side="right"), hi).astype(np.int64)


def map_points(v0s, V0s, idx, W):
    """p_i = v0s[idx[i]] + V0s[idx[i]] @ W[i]."""
    return v0s[idx] + np.einsum("kij,kj->ki", V0s[idx], W)


def hit_and_run_chain(A, b, x0, gauss, u, burn_in, thin, n_out, min_chord):
    """Chain walk with pre-drawn variates, see the loop-body docstring."""
    n = A.shape[1]
    T = gauss.shape[0]
    x = x0.copy()
    out = np.empty((n_out, n), np.float64)
    m = 0
    status = 0
    for t in range(T):
        g = gauss[t]
        nrm = math.sqrt(float(g @ g))
        if nrm == 0.0:
            status = 1
            break
        d = g / nrm
        den = A @ d
        sl = b - A @ x
        pos = den > 0.0
        neg = den < 0.0
        hi = (sl[pos] / den[pos]).min() if pos.any() else np.inf
        lo = (sl[neg] / den[neg]).max() if neg.any() else -np.inf
        if hi == np.inf or lo == -np.inf:
            status = 2
            break
        if not (hi - lo >= min_chord):
            status = 1
            break
        x = x + (lo + u[t] * (hi - lo)) * d
        if t >= burn_in and (t - burn_in + 1) % thin == 0 and m < n_out:
            out[m] = x
            m += 1
    return out, m, status


def containment_mask(A, b, pts, eps):
    """True where A p <= b + eps holds for every constraint row."""
    return (pts @ A.T <= (b + eps)[None, :]).all(axis=1)
