"""Pure-NumPy k-means kernel: the fallback for the compiled extension.

Implements the same contract as ``_kmeans_c``: distance-weighted (k-means++
style) seeding driven by pre-drawn uniforms, Lloyd iterations with a
relative-improvement stopping rule, deterministic empty-cluster repair, and
best-of-``restarts`` selection by (objective, restart index).  All tie
breaks favour the lowest index, matching the compiled kernel, so the two
implementations agree on the chosen partitions.
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"


def _dist2(X: np.ndarray, c: np.ndarray) -> np.ndarray:
    d = X - c
    return (d * d).sum(axis=1)


def plusplus_init(X: np.ndarray, K: int, draws: np.ndarray) -> np.ndarray:
    """Pick K seed centroids; ``draws`` supplies the K uniforms consumed.

    Center k is chosen with probability proportional to the squared
    distance to the nearest already-chosen center.  When that distribution
    degenerates (all remaining distances zero, e.g. duplicated points), the
    lowest-index point not yet chosen is taken instead.
    """
    n = X.shape[0]
    C = np.empty((K, X.shape[1]), dtype=np.float64)
    chosen = []
    idx = min(int(draws[0] * n), n - 1)
    C[0] = X[idx]
    chosen.append(idx)
    D = _dist2(X, C[0])
    for k in range(1, K):
        cum = np.cumsum(D)
        total = cum[-1]
        if total > 0.0:
            target = draws[k] * total
            idx = int(np.searchsorted(cum, target, side="right"))
            if idx > n - 1:
                idx = n - 1
        else:
            idx = next(i for i in range(n) if i not in chosen)
        C[k] = X[idx]
        chosen.append(idx)
        np.minimum(D, _dist2(X, C[k]), out=D)
    return C


def _repair_empty(X, labels, dist2, C, sizes):
    """Reseed each empty cluster at the farthest point from its centroid.

    Donors are restricted to clusters of size >= 2 so no cluster is emptied
    in turn; ties go to the lowest point index.  The stolen point's cost
    drops to zero, so the objective never increases.
    """
    for k in np.flatnonzero(sizes == 0):
        eligible = sizes[labels] >= 2
        cand = np.where(eligible, dist2, -np.inf)
        donor = int(np.argmax(cand))
        sizes[labels[donor]] -= 1
        labels[donor] = k
        sizes[k] = 1
        C[k] = X[donor]
        dist2[donor] = 0.0


def kmeans_single(
    X: np.ndarray, K: int, max_iters: int, tol: float, draws: np.ndarray
):
    """One seeded k-means run.

    Returns ``(labels, centroids, objective, iterations, trace)`` where
    ``trace`` is the per-iteration objective (non-increasing).  The stop
    rule is relative: iterate until the improvement falls to ``tol`` times
    the previous objective or ``max_iters`` is hit.
    """
    n = X.shape[0]
    C = plusplus_init(X, K, draws)
    trace = np.empty(max_iters, dtype=np.float64)
    D = np.empty((n, K), dtype=np.float64)
    prev = np.inf
    labels = np.zeros(n, dtype=np.int64)
    obj = 0.0
    it = 0
    for it in range(1, max_iters + 1):
        for k in range(K):
            D[:, k] = _dist2(X, C[k])
        labels = np.argmin(D, axis=1).astype(np.int64)
        dist2 = D[np.arange(n), labels].copy()
        sizes = np.bincount(labels, minlength=K)
        if np.any(sizes == 0):
            _repair_empty(X, labels, dist2, C, sizes)
        # cumsum, not sum: sequential accumulation matches the compiled kernel
        obj = float(np.cumsum(dist2)[-1]) if n else 0.0
        trace[it - 1] = obj
        if it > 1 and prev - obj <= tol * prev:
            break
        prev = obj
        sums = np.zeros((K, X.shape[1]), dtype=np.float64)
        np.add.at(sums, labels, X)
        C = sums / sizes[:, None]
    return labels, C, obj, it, trace[:it].copy()


def kmeans_restarts(
    X: np.ndarray, K: int, restarts: int, max_iters: int, tol: float, draws: np.ndarray
):
    """Best of ``restarts`` independent runs; row r of ``draws`` seeds run r.

    The winner is the lexicographic minimum of (objective, restart index),
    so serial and parallel execution of restarts agree.
    """
    best = None
    for r in range(restarts):
        labels, C, obj, iters, trace = kmeans_single(X, K, max_iters, tol, draws[r])
        if best is None or obj < best[2]:
            best = (labels, C, obj, iters, trace)
    return best
