#!/usr/bin/env python3
"""Benchmark the compiled k-means kernel against the pure-NumPy fallback.

Workloads mirror the package's real call sites: clustering rows of spectral
embeddings (n x K matrices with K in {2, 4}) at simulation and real-network
sizes, with the default 20 restarts.

    python3 benchmarks/bench_kmeans.py [--repeats N]
"""

import argparse
import time

import numpy as np

from dcdfm.clustering import KMeansConfig, available_kernels, kmeans
from dcdfm.detect import embed
from dcdfm.harness import P_NONNEGATIVE, draw_labels
from dcdfm.model import (
    Bernoulli,
    ConnectivityMatrix,
    Heterogeneity,
    Labeling,
    ModelParams,
    expected_adjacency,
    sample_adjacency,
)


def embedding_workload(n, K, seed):
    """Row-normalized eigenvector rows of a sampled two-to-four block network."""
    rng = np.random.default_rng(seed)
    params = ModelParams(
        K=K,
        labeling=Labeling(draw_labels(rng, n, K), K),
        P=ConnectivityMatrix(P_NONNEGATIVE[:K, :K] / np.abs(P_NONNEGATIVE[:K, :K]).max()),
        theta=Heterogeneity(0.5 * rng.random(n) + 0.5),
    )
    A = sample_adjacency(expected_adjacency(params), Bernoulli(), seed=seed)
    return embed(A, K).normalized


def blob_workload(n, d, K, seed):
    rng = np.random.default_rng(seed)
    centers = rng.normal(scale=4.0, size=(K, d))
    return centers[rng.integers(0, K, n)] + rng.normal(size=(n, d))


def time_kernel(points, config, kernel, repeats):
    best = np.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = kmeans(points, config, kernel=kernel)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    kernels = available_kernels()
    workloads = [
        ("embedding n=400 K=4", embedding_workload(400, 4, seed=1), 4),
        ("embedding n=1222 K=2", embedding_workload(1222, 2, seed=2), 2),
        ("blobs n=2000 d=4 K=4", blob_workload(2000, 4, 4, seed=3), 4),
        ("blobs n=10000 d=2 K=6", blob_workload(10_000, 2, 6, seed=4), 6),
    ]

    print(f"kernels available: {', '.join(kernels)}; {args.repeats} repeats, best-of timing")
    header = f"{'workload':26s} " + "".join(f"{k:>12s}" for k in kernels)
    if len(kernels) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for name, points, K in workloads:
        config = KMeansConfig(K=K, seed=0)
        times = {}
        results = {}
        for kernel in kernels:
            times[kernel], results[kernel] = time_kernel(points, config, kernel, args.repeats)
        row = f"{name:26s} " + "".join(f"{times[k] * 1e3:10.2f}ms" for k in kernels)
        if len(kernels) == 2:
            row += f"{times['python'] / times['c']:9.1f}x"
            same = np.array_equal(
                results["c"].labeling.labels, results["python"].labeling.labels
            )
            row += "" if same else "  (LABEL MISMATCH)"
        print(row)


if __name__ == "__main__":
    main()
