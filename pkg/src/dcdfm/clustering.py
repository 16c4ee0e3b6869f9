"""Seeded, restarted k-means on embedding rows.

The inner loop lives in a compiled Cython kernel (``_kmeans_c``) when the
extension built, with a pure-NumPy twin (``_kmeans_py``) selected at import
as the fallback.  Both implement identical seeding, iteration, tie-break,
and repair rules; ``benchmarks/bench_kmeans.py`` compares their speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kmeans_py
from ._rng import make_rng
from .errors import TooFewPoints
from .model import Labeling

try:
    from . import _kmeans_c
except ImportError:  # extension not built; pure-Python fallback
    _kmeans_c = None

DEFAULT_KERNEL = "c" if _kmeans_c is not None else "python"


def available_kernels() -> tuple[str, ...]:
    return ("c", "python") if _kmeans_c is not None else ("python",)


def get_kernel(name: str | None = None):
    """Resolve a kernel module by name ('c' or 'python'); None = default."""
    if name is None:
        name = DEFAULT_KERNEL
    if name == "python":
        return _kmeans_py
    if name == "c":
        if _kmeans_c is None:
            raise ValueError("compiled k-means kernel is not available in this install")
        return _kmeans_c
    raise ValueError(f"unknown kernel {name!r}; expected 'c' or 'python'")


@dataclass(frozen=True)
class KMeansConfig:
    """Knobs for one clustering call.

    ``tol`` is the relative objective-improvement threshold for stopping a
    Lloyd run.  ``seed`` drives the distance-weighted seeding of every
    restart; identical seeds give bitwise-identical results.
    """

    K: int
    restarts: int = 20
    max_iters: int = 100
    tol: float = 1e-8
    seed: "int | np.random.SeedSequence | None" = 0

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True, eq=False)
class KMeansResult:
    """Winning run: 1-based assignment, centroids, objective, iterations."""

    labeling: Labeling
    centroids: np.ndarray
    objective: float
    iterations: int


def kmeans(points: np.ndarray, config: KMeansConfig, kernel: str | None = None) -> KMeansResult:
    """Cluster rows of ``points`` into ``config.K`` groups.

    Runs ``config.restarts`` independent seeded k-means++ initialisations
    followed by Lloyd iterations; the result with the lowest objective wins
    (earliest restart on ties).  Empty clusters are repaired during
    iteration, so the returned assignment uses all K labels.
    """
    X = np.ascontiguousarray(points, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"points must be 2-d, got shape {X.shape}")
    n = X.shape[0]
    if n < config.K:
        raise TooFewPoints(f"{n} points cannot form {config.K} clusters")
    draws = make_rng(config.seed).random((config.restarts, config.K))
    kern = get_kernel(kernel)
    labels, centroids, objective, iterations, _trace = kern.kmeans_restarts(
        X, config.K, config.restarts, config.max_iters, config.tol, draws
    )
    return KMeansResult(
        labeling=Labeling(np.asarray(labels) + 1, config.K),
        centroids=np.asarray(centroids),
        objective=float(objective),
        iterations=int(iterations),
    )
