"""Clustering error metrics and numerical bound evaluation.

Two label-agreement metrics, both exact minima over label permutations:

* :func:`error_rate` — permutation-minimized one-hot Hamming distance
  divided by n; every misclassified node contributes 2/n (both one-hot
  rows differ in two entries), so the range is [0, 2(1 - 1/K)].
* :func:`worst_community_error` — permutation-minimized worst
  per-community normalized confusion mass (missed members plus intruders,
  over the community size).

Plus :func:`bound_report`, which evaluates the spectral and concentration
quantities the estimation theory is built from, for finite instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import log

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionMismatch, KTooLargeForExhaustive
from .model import Labeling, ModelParams, WeightedAdjacency, expected_adjacency, validate_params
from .spectral import spectral_norm

# Above this K, K! permutation scans are refused; error_rate switches to
# optimal assignment (exact, its objective is additive over matched pairs)
# while worst_community_error has no such decomposition and raises.
EXHAUSTIVE_K_LIMIT = 8


def _check_pair(est: Labeling, truth: Labeling) -> None:
    if est.n != truth.n:
        raise DimensionMismatch(f"labelings have {est.n} and {truth.n} nodes")
    if est.K != truth.K:
        raise DimensionMismatch(f"labelings have K={est.K} and K={truth.K}")


def confusion_matrix(est: Labeling, truth: Labeling) -> np.ndarray:
    """K-by-K counts: entry (k, l) is |{i: truth=k+1, est=l+1}|."""
    _check_pair(est, truth)
    K = truth.K
    idx = (truth.labels - 1) * K + (est.labels - 1)
    return np.bincount(idx, minlength=K * K).reshape(K, K)


def error_rate(est: Labeling, truth: Labeling) -> float:
    """Permutation-minimized one-hot disagreement count over n.

    Exact: exhaustive over permutations for K <= 8, optimal assignment on
    the confusion matrix above that (same optimum; the objective is a sum
    of per-match terms).
    """
    C = confusion_matrix(est, truth)
    K = truth.K
    if K <= EXHAUSTIVE_K_LIMIT:
        ks = np.arange(K)
        best = max(int(C[ks, list(perm)].sum()) for perm in permutations(range(K)))
    else:
        rows, cols = linear_sum_assignment(-C)
        best = int(C[rows, cols].sum())
    return 2.0 * (truth.n - best) / truth.n


def worst_community_error(est: Labeling, truth: Labeling) -> float:
    """Permutation-minimized max per-community normalized confusion.

    For matching permutation pi, community k contributes (members of k
    assigned outside pi(k), plus outsiders assigned to pi(k)) divided by
    the size of k; the max over k is minimized over all K! matchings.
    This min-max objective is not additive, so only the exhaustive search
    is exact; K > 8 is refused.
    """
    C = confusion_matrix(est, truth)
    K = truth.K
    if K > EXHAUSTIVE_K_LIMIT:
        raise KTooLargeForExhaustive(f"K={K} exceeds exhaustive limit {EXHAUSTIVE_K_LIMIT}")
    truth_sizes = C.sum(axis=1)
    est_sizes = C.sum(axis=0)
    # terms[k, j] = (|C_k| + |Chat_j| - 2 C[k, j]) / |C_k|
    terms = (truth_sizes[:, None] + est_sizes[None, :] - 2 * C) / truth_sizes[:, None]
    ks = np.arange(K)
    return min(float(terms[ks, list(perm)].max()) for perm in permutations(range(K)))


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Finite-instance values of the quantities driving the error theory.

    ``spectral_gap``       |lambda_K| of the expectation matrix.
    ``gap_lower_bound``    theta_min^2 * |lambda_K(P)| * n_min, the proven
                           floor of ``spectral_gap``.
    ``deviation_scale``    sqrt(variance_bound * theta_max * ||theta||_1 *
                           log n), the concentration scale for ||A - E[A]||.
    ``observed_deviation`` spectral norm of A - E[A] on this instance.
    ``consistency_rate``   the error-bound rate expression evaluated at the
                           instance's parameters.
    """

    variance_bound: float
    spectral_gap: float
    gap_lower_bound: float
    deviation_scale: float
    observed_deviation: float
    consistency_rate: float

    def as_dict(self) -> dict:
        return {
            "variance_bound": self.variance_bound,
            "spectral_gap": self.spectral_gap,
            "gap_lower_bound": self.gap_lower_bound,
            "deviation_scale": self.deviation_scale,
            "observed_deviation": self.observed_deviation,
            "consistency_rate": self.consistency_rate,
        }


def bound_report(A: WeightedAdjacency, params: ModelParams, variance_bound: float) -> BoundReport:
    """Evaluate the bound quantities for one (A, params) instance.

    ``variance_bound`` is the distribution's bound on
    Var(A(i,j))/(theta_i theta_j) (see :func:`dcdfm.model.variance_bound`).
    """
    validate_params(params)
    omega = expected_adjacency(params)
    if isinstance(A, WeightedAdjacency):
        A_mat = A.matrix
    else:
        A_mat = np.asarray(A, dtype=np.float64)
    if A_mat.shape != omega.shape:
        raise DimensionMismatch(
            f"adjacency is {A_mat.shape} but parameters describe {omega.shape}"
        )

    n = params.labeling.n
    K = params.K
    theta = params.theta
    n_min = params.labeling.n_min
    n_max = params.labeling.n_max
    lam_K_P = params.P.smallest_eigenvalue_magnitude()

    eigs = np.linalg.eigvalsh(omega)
    spectral_gap = float(np.sort(np.abs(eigs))[::-1][K - 1])
    gap_lower_bound = theta.theta_min**2 * lam_K_P * n_min
    deviation_scale = float(np.sqrt(variance_bound * theta.theta_max * theta.l1 * log(n)))
    observed_deviation = spectral_norm(A_mat - omega)
    consistency_rate = (
        variance_bound
        * theta.theta_max**3
        * K**2
        * n_max
        * theta.l1
        * log(n)
        / (lam_K_P**2 * theta.theta_min**6 * n_min**3)
    )
    return BoundReport(
        variance_bound=float(variance_bound),
        spectral_gap=spectral_gap,
        gap_lower_bound=float(gap_lower_bound),
        deviation_scale=deviation_scale,
        observed_deviation=observed_deviation,
        consistency_rate=float(consistency_rate),
    )
