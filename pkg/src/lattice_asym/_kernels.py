"""Compiled leapfrog row kernels.

Each kernel writes rows ``[r0, r1)`` of ``u_next`` from ``u`` and ``u_prev``
only, so disjoint row blocks can run on separate threads (``nogil``) and
produce bit-identical results regardless of the partition.  The return
value is False if any written value is non-finite (``v * 0.0`` is
NaN exactly when ``v`` is not finite, and NaN survives the running sum).
"""

import numba

# values below this are flushed to zero; subnormal arithmetic in the
# exponentially small tail ahead of the front is ~100x slower
TINY = 1e-280


@numba.njit(nogil=True, cache=True)
def full_rows(u, u_prev, u_next, r0, r1, dt2, force, center):
    # arrays carry a one-cell zero border (clamped exterior)
    probe = 0.0
    ncol = u.shape[1] - 1
    for i in range(r0, r1):
        for j in range(1, ncol):
            acc = u[i + 1, j] + u[i - 1, j] + u[i, j + 1] + u[i, j - 1] - 4.0 * u[i, j]
            v = 2.0 * u[i, j] - u_prev[i, j] + dt2 * acc
            if -TINY < v < TINY:
                v = 0.0
            probe += v * 0.0
            u_next[i, j] = v
    if r0 <= center < r1:
        v = u_next[center, center] + dt2 * force
        probe += v * 0.0
        u_next[center, center] = v
    return probe == 0.0


@numba.njit(nogil=True, cache=True)
def octant_rows(u, u_prev, u_next, r0, r1, dt2, force):
    # row i holds sites (m, n) = (i, j) with 0 <= j <= i; row N+1 is the zero exterior.
    # Reads across n = 0 and across the diagonal are folded back into the octant.
    probe = 0.0
    for i in range(r0, r1):
        if i == 0:
            acc = 4.0 * u[1, 0] - 4.0 * u[0, 0] + force
            v = 2.0 * u[0, 0] - u_prev[0, 0] + dt2 * acc
            probe += v * 0.0
            u_next[0, 0] = v
            continue
        # n = 0: (i, -1) folds to (i, 1)
        acc = u[i + 1, 0] + u[i - 1, 0] + 2.0 * u[i, 1] - 4.0 * u[i, 0]
        v = 2.0 * u[i, 0] - u_prev[i, 0] + dt2 * acc
        if -TINY < v < TINY:
            v = 0.0
        probe += v * 0.0
        u_next[i, 0] = v
        for j in range(1, i):
            acc = u[i + 1, j] + u[i - 1, j] + u[i, j + 1] + u[i, j - 1] - 4.0 * u[i, j]
            v = 2.0 * u[i, j] - u_prev[i, j] + dt2 * acc
            if -TINY < v < TINY:
                v = 0.0
            probe += v * 0.0
            u_next[i, j] = v
        # n = m: (i-1, i) folds to (i, i-1) and (i, i+1) to (i+1, i)
        acc = 2.0 * u[i + 1, i] + 2.0 * u[i, i - 1] - 4.0 * u[i, i]
        v = 2.0 * u[i, i] - u_prev[i, i] + dt2 * acc
        if -TINY < v < TINY:
            v = 0.0
        probe += v * 0.0
        u_next[i, i] = v
    return probe == 0.0
