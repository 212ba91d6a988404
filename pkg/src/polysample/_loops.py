"""Inner-loop bodies shared by the compiled and plain backends.

Every function here is written in the restricted style the JIT accepts:
explicit loops over float64 arrays, no Python objects, no exceptions.
Failures are reported through integer status codes and the wrapping
modules translate them into typed errors.  Bodies are self-contained on
purpose, a compiled copy must not call back into interpreted code.
"""

import math

import numpy as np


def gauss_abs_det(M):
    """|det M| by Gaussian elimination with partial pivoting.

    A pivot below 1e-12 times the largest entry magnitude counts as zero
    and the determinant is reported as exactly 0.0.
    """
    n = M.shape[0]
    U = M.copy()
    scale = 0.0
    for i in range(n):
        for j in range(n):
            a = abs(U[i, j])
            if a > scale:
                scale = a
    tol = 1e-12 * scale
    det = 1.0
    for k in range(n):
        piv = k
        best = abs(U[k, k])
        for i in range(k + 1, n):
            a = abs(U[i, k])
            if a > best:
                best = a
                piv = i
        if best <= tol:
            return 0.0
        if piv != k:
            for j in range(k, n):
                tmp = U[k, j]
                U[k, j] = U[piv, j]
                U[piv, j] = tmp
        pivval = U[k, k]
        det *= abs(pivval)
        for i in range(k + 1, n):
            f = U[i, k] / pivval
            if f != 0.0:
                for j in range(k + 1, n):
                    U[i, j] -= f * U[k, j]
    return det


def abs_dets_batch(mats):
    """|det| of a (B, n, n) stack, same pivot rule as gauss_abs_det."""
    B = mats.shape[0]
    n = mats.shape[1]
    out = np.empty(B, np.float64)
    U = np.empty((n, n), np.float64)
    for s in range(B):
        scale = 0.0
        for i in range(n):
            for j in range(n):
                v = mats[s, i, j]
                U[i, j] = v
                a = abs(v)
                if a > scale:
                    scale = a
        tol = 1e-12 * scale
        det = 1.0
        for k in range(n):
            piv = k
            best = abs(U[k, k])
            for i in range(k + 1, n):
                a = abs(U[i, k])
                if a > best:
                    best = a
                    piv = i
            if best <= tol:
                det = 0.0
                break
            if piv != k:
                for j in range(k, n):
                    tmp = U[k, j]
                    U[k, j] = U[piv, j]
                    U[piv, j] = tmp
            pivval = U[k, k]
            det *= abs(pivval)
            for i in range(k + 1, n):
                f = U[i, k] / pivval
                if f != 0.0:
                    for j in range(k + 1, n):
                        U[i, j] -= f * U[k, j]
        out[s] = det
    return out


def barycentric_batch(V0, v0, pts):
    """Coordinates a with V0 a = p - v0 for each row p of pts.

    V0 must be nonsingular, callers guarantee that.  Factors once, then
    substitutes per point.
    """
    n = V0.shape[0]
    m = pts.shape[0]
    LU = V0.copy()
    perm = np.empty(n, np.int64)
    for k in range(n):
        perm[k] = k
    for k in range(n):
        piv = k
        best = abs(LU[k, k])
        for i in range(k + 1, n):
            a = abs(LU[i, k])
            if a > best:
                best = a
                piv = i
        if piv != k:
            for j in range(n):
                tmp = LU[k, j]
                LU[k, j] = LU[piv, j]
                LU[piv, j] = tmp
            t = perm[k]
            perm[k] = perm[piv]
            perm[piv] = t
        pivval = LU[k, k]
        for i in range(k + 1, n):
            f = LU[i, k] / pivval
            LU[i, k] = f
            for j in range(k + 1, n):
                LU[i, j] -= f * LU[k, j]
    out = np.empty((m, n), np.float64)
    y = np.empty(n, np.float64)
    for s in range(m):
        for i in range(n):
            acc = pts[s, perm[i]] - v0[perm[i]]
            for j in range(i):
                acc -= LU[i, j] * y[j]
            y[i] = acc
        for i in range(n - 1, -1, -1):
            acc = y[i]
            for j in range(i + 1, n):
                acc -= LU[i, j] * out[s, j]
            out[s, i] = acc / LU[i, i]
    return out


def enumerate_bases(A, b, feas_eps, dedup_eps, sing_tol, max_found):
    """Walk every n-row subsystem of A x = b and collect feasible solutions.

    Returns (points (max_found, n), count, status).  status 1 means the
    point buffer overflowed.  Points are deduplicated by Euclidean
    distance dedup_eps; a subsystem whose pivot falls below sing_tol
    times its own largest entry is skipped as singular.
    """
    r = A.shape[0]
    n = A.shape[1]
    found = np.empty((max_found, n), np.float64)
    n_found = 0
    status = 0
    comb = np.empty(n, np.int64)
    for i in range(n):
        comb[i] = i
    M = np.empty((n, n), np.float64)
    rhs = np.empty(n, np.float64)
    x = np.empty(n, np.float64)
    dedup2 = dedup_eps * dedup_eps
    while True:
        scale = 0.0
        for i in range(n):
            ri = comb[i]
            for j in range(n):
                v = A[ri, j]
                M[i, j] = v
                a = abs(v)
                if a > scale:
                    scale = a
            rhs[i] = b[ri]
        tol = sing_tol * scale
        singular = False
        for k in range(n):
            piv = k
            best = abs(M[k, k])
            for i in range(k + 1, n):
                a = abs(M[i, k])
                if a > best:
                    best = a
                    piv = i
            if best <= tol:
                singular = True
                break
            if piv != k:
                for j in range(k, n):
                    tmp = M[k, j]
                    M[k, j] = M[piv, j]
                    M[piv, j] = tmp
                tmp = rhs[k]
                rhs[k] = rhs[piv]
                rhs[piv] = tmp
            pivval = M[k, k]
            for i in range(k + 1, n):
                f = M[i, k] / pivval
                if f != 0.0:
                    rhs[i] -= f * rhs[k]
                    for j in range(k + 1, n):
                        M[i, j] -= f * M[k, j]
        if not singular:
            for i in range(n - 1, -1, -1):
                acc = rhs[i]
                for j in range(i + 1, n):
                    acc -= M[i, j] * x[j]
                x[i] = acc / M[i, i]
            # cheap duplicate test first, most repeats hit a known vertex
            dup = False
            for t in range(n_found):
                d2 = 0.0
                for j in range(n):
                    dj = found[t, j] - x[j]
                    d2 += dj * dj
                if d2 <= dedup2:
                    dup = True
                    break
            if not dup:
                feas = True
                for t in range(r):
                    acc = 0.0
                    for j in range(n):
                        acc += A[t, j] * x[j]
                    if acc > b[t] + feas_eps:
                        feas = False
                        break
                if feas:
                    if n_found >= max_found:
                        status = 1
                        break
                    for j in range(n):
                        found[n_found, j] = x[j]
                    n_found += 1
        i = n - 1
        while i >= 0 and comb[i] == r - n + i:
            i -= 1
        if i < 0:
            break
        comb[i] += 1
        for k in range(i + 1, n):
            comb[k] = comb[k - 1] + 1
    return found, n_found, status


def unit_simplex_batch(E):
    """Map exponential draws (N, n+1) to flat-Dirichlet weights (N, n).

    Row i becomes E[i, 1:] / sum(E[i, :]).  The omitted first component
    is the implied weight of the simplex origin.
    """
    N = E.shape[0]
    m = E.shape[1]
    W = np.empty((N, m - 1), np.float64)
    for i in range(N):
        s = 0.0
        for j in range(m):
            s += E[i, j]
        for j in range(1, m):
            W[i, j - 1] = E[i, j] / s
    return W


def categorical_indices(cdf, u):
    """Smallest k with u < cdf[k], clamped to the last cell."""
    N = u.shape[0]
    K = cdf.shape[0]
    out = np.empty(N, np.int64)
    for i in range(N):
        lo = 0
        hi = K - 1
        ui = u[i]
        while lo < hi:
            mid = (lo + hi) // 2
            if ui < cdf[mid]:
                hi = mid
            else:
                lo = mid + 1
        out[i] = lo
    return out


def map_points(v0s, V0s, idx, W):
    """p_i = v0s[idx[i]] + V0s[idx[i]] @ W[i]."""
    N = idx.shape[0]
    n = v0s.shape[1]
    out = np.empty((N, n), np.float64)
    for i in range(N):
        k = idx[i]
        for d in range(n):
            acc = v0s[k, d]
            for j in range(n):
                acc += V0s[k, d, j] * W[i, j]
            out[i, d] = acc
    return out


def hit_and_run_chain(A, b, x0, gauss, u, burn_in, thin, n_out, min_chord):
    """Run a hit-and-run chain from x0 using pre-drawn variates.

    gauss (T, n) supplies directions, u (T,) the positions along each
    chord.  After burn_in steps every thin-th state is emitted.  Returns
    (points, count, status); status 1 flags a chord shorter than
    min_chord, status 2 an unbounded chord.
    """
    r = A.shape[0]
    n = A.shape[1]
    T = gauss.shape[0]
    x = x0.copy()
    d = np.empty(n, np.float64)
    out = np.empty((n_out, n), np.float64)
    m = 0
    status = 0
    for t in range(T):
        nrm = 0.0
        for j in range(n):
            g = gauss[t, j]
            nrm += g * g
        nrm = math.sqrt(nrm)
        if nrm == 0.0:
            status = 1
            break
        for j in range(n):
            d[j] = gauss[t, j] / nrm
        lo = -np.inf
        hi = np.inf
        for i in range(r):
            den = 0.0
            sl = b[i]
            for j in range(n):
                den += A[i, j] * d[j]
                sl -= A[i, j] * x[j]
            if den > 0.0:
                bound = sl / den
                if bound < hi:
                    hi = bound
            elif den < 0.0:
                bound = sl / den
                if bound > lo:
                    lo = bound
        if hi == np.inf or lo == -np.inf:
            status = 2
            break
        if not (hi - lo >= min_chord):
            status = 1
            break
        lam = lo + u[t] * (hi - lo)
        for j in range(n):
            x[j] += lam * d[j]
        if t >= burn_in:
            if (t - burn_in + 1) % thin == 0 and m < n_out:
                for j in range(n):
                    out[m, j] = x[j]
                m += 1
    return out, m, status


def containment_mask(A, b, pts, eps):
    """True where A p <= b + eps holds row-wise for every constraint."""
    N = pts.shape[0]
    r = A.shape[0]
    n = A.shape[1]
    out = np.empty(N, np.bool_)
    for s in range(N):
        ok = True
        for i in range(r):
            acc = 0.0
            for j in range(n):
                acc += A[i, j] * pts[s, j]
            if acc > b[i] + eps:
                ok = False
                break
        out[s] = ok
    return out
