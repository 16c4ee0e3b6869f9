# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled k-means kernel.

Mirrors ``_kmeans_py`` operation for operation: same seeding scheme driven
by pre-drawn uniforms, same lowest-index tie breaks, same sequential
accumulation order for objectives and centroid sums, so the two kernels
produce matching partitions (bitwise-equal objectives for point dimension
up to 8, which covers every caller in this package).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

KERNEL_NAME = "c"


cdef inline double _row_dist2(
    const double[:, ::1] X, Py_ssize_t i, const double[:, ::1] C, Py_ssize_t k
) noexcept nogil:
    cdef double acc = 0.0
    cdef double diff
    cdef Py_ssize_t t
    for t in range(X.shape[1]):
        diff = X[i, t] - C[k, t]
        acc += diff * diff
    return acc


cdef void _plusplus_init(
    const double[:, ::1] X,
    Py_ssize_t K,
    const double[::1] draws,
    double[:, ::1] C,
    double[::1] D,
    unsigned char[::1] chosen,
) noexcept:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t i, k, t, idx
    cdef double total, target, acc, dist

    for i in range(n):
        chosen[i] = 0
    idx = <Py_ssize_t>(draws[0] * n)
    if idx > n - 1:
        idx = n - 1
    for t in range(d):
        C[0, t] = X[idx, t]
    chosen[idx] = 1
    for i in range(n):
        D[i] = _row_dist2(X, i, C, 0)

    for k in range(1, K):
        total = 0.0
        for i in range(n):
            total += D[i]
        if total > 0.0:
            target = draws[k] * total
            idx = n - 1
            acc = 0.0
            for i in range(n):
                acc += D[i]
                if acc > target:
                    idx = i
                    break
        else:
            idx = 0
            for i in range(n):
                if not chosen[i]:
                    idx = i
                    break
        for t in range(d):
            C[k, t] = X[idx, t]
        chosen[idx] = 1
        for i in range(n):
            dist = _row_dist2(X, i, C, k)
            if dist < D[i]:
                D[i] = dist


def kmeans_single(
    const double[:, ::1] X,
    Py_ssize_t K,
    Py_ssize_t max_iters,
    double tol,
    const double[::1] draws,
):
    """One seeded run; returns (labels, centroids, objective, iterations, trace)."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]

    C_arr = np.empty((K, d), dtype=np.float64)
    labels_arr = np.zeros(n, dtype=np.int64)
    dist2_arr = np.empty(n, dtype=np.float64)
    sizes_arr = np.zeros(K, dtype=np.int64)
    sums_arr = np.zeros((K, d), dtype=np.float64)
    trace_arr = np.empty(max_iters, dtype=np.float64)
    chosen_arr = np.zeros(n, dtype=np.uint8)

    cdef double[:, ::1] C = C_arr
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double[::1] dist2 = dist2_arr
    cdef cnp.int64_t[::1] sizes = sizes_arr
    cdef double[:, ::1] sums = sums_arr
    cdef double[::1] trace = trace_arr
    cdef unsigned char[::1] chosen = chosen_arr

    cdef Py_ssize_t i, k, t, it, best_k, donor
    cdef double bestd, dist, obj, prev, best_val
    cdef cnp.int64_t lab

    _plusplus_init(X, K, draws, C, dist2, chosen)

    prev = INFINITY
    obj = 0.0
    it = 0
    for it in range(1, max_iters + 1):
        # assignment: nearest centroid, lowest index on ties
        for k in range(K):
            sizes[k] = 0
        for i in range(n):
            best_k = 0
            bestd = _row_dist2(X, i, C, 0)
            for k in range(1, K):
                dist = _row_dist2(X, i, C, k)
                if dist < bestd:
                    bestd = dist
                    best_k = k
            labels[i] = best_k
            dist2[i] = bestd
            sizes[best_k] += 1

        # empty-cluster repair: reseed at the farthest point whose cluster
        # keeps at least one member; lowest index on ties
        for k in range(K):
            if sizes[k] == 0:
                donor = -1
                best_val = -INFINITY
                for i in range(n):
                    if sizes[labels[i]] >= 2 and dist2[i] > best_val:
                        best_val = dist2[i]
                        donor = i
                sizes[labels[donor]] -= 1
                labels[donor] = k
                sizes[k] = 1
                for t in range(d):
                    C[k, t] = X[donor, t]
                dist2[donor] = 0.0

        obj = 0.0
        for i in range(n):
            obj += dist2[i]
        trace[it - 1] = obj
        if it > 1 and prev - obj <= tol * prev:
            break
        prev = obj

        # centroid update: running sums in point order
        for k in range(K):
            for t in range(d):
                sums[k, t] = 0.0
        for i in range(n):
            lab = labels[i]
            for t in range(d):
                sums[lab, t] += X[i, t]
        for k in range(K):
            for t in range(d):
                C[k, t] = sums[k, t] / sizes[k]

    return labels_arr, C_arr, obj, it, trace_arr[:it].copy()


def kmeans_restarts(
    const double[:, ::1] X,
    Py_ssize_t K,
    Py_ssize_t restarts,
    Py_ssize_t max_iters,
    double tol,
    const double[:, ::1] draws,
):
    """Best of ``restarts`` runs by (objective, restart index)."""
    cdef Py_ssize_t r
    best = None
    for r in range(restarts):
        result = kmeans_single(X, K, max_iters, tol, draws[r])
        if best is None or result[2] < best[2]:
            best = result
    return best
