"""End-to-end community detection pipelines.

Two variants share one spectral step:

* ``ndfa`` (normalized distribution-free algorithm): leading-K
  eigendecomposition of the adjacency, row-normalize the eigenvector
  matrix to cancel per-node degree weights, then k-means on the rows.
* ``dfa``: the uncorrected baseline, k-means directly on the eigenvector
  rows without normalization.

Both are re-implemented here over the same eigensolver and k-means so
comparisons between them are apples to apples.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .clustering import KMeansConfig, KMeansResult, kmeans
from .errors import DegenerateEmbeddingWarning, DimensionMismatch
from .model import Labeling, WeightedAdjacency
from .spectral import SpectralEmbedding, leading_eigs, normalize_embedding

NDFA = "nDFA"
DFA = "DFA"


@dataclass(frozen=True, eq=False)
class DetectionOutput:
    """Estimated labeling plus the diagnostics that produced it."""

    labeling: Labeling
    embedding: SpectralEmbedding
    kmeans: KMeansResult
    method: str


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, WeightedAdjacency):
        return A.matrix
    return np.asarray(A, dtype=np.float64)


def embed(A, K: int) -> SpectralEmbedding:
    """Spectral step shared by both pipelines, with row normalization.

    Warns with :class:`DegenerateEmbeddingWarning` when rows of the
    eigenvector matrix carried no signal and got the constant fallback row.
    """
    emb = normalize_embedding(leading_eigs(_as_matrix(A), K))
    if emb.degenerate_rows:
        rows = emb.degenerate_rows
        shown = ", ".join(map(str, rows[:20])) + (", ..." if len(rows) > 20 else "")
        warnings.warn(
            DegenerateEmbeddingWarning(
                f"{len(rows)} embedding row(s) had ~zero norm and were replaced "
                f"by the constant row: [{shown}]",
                rows=rows,
            ),
            stacklevel=2,
        )
    return emb


def _check_config(K: int, config: KMeansConfig | None) -> KMeansConfig:
    if config is None:
        return KMeansConfig(K=K)
    if config.K != K:
        raise DimensionMismatch(f"config.K={config.K} differs from requested K={K}")
    return config


def ndfa(A, K: int, config: KMeansConfig | None = None) -> DetectionOutput:
    """Degree-corrected detection: k-means on row-normalized eigenvectors."""
    config = _check_config(K, config)
    emb = embed(A, K)
    km = kmeans(emb.normalized, config)
    return DetectionOutput(labeling=km.labeling, embedding=emb, kmeans=km, method=NDFA)


def dfa(A, K: int, config: KMeansConfig | None = None) -> DetectionOutput:
    """Uncorrected baseline: k-means on raw eigenvector rows."""
    config = _check_config(K, config)
    emb = embed(A, K)
    km = kmeans(emb.vectors, config)
    return DetectionOutput(labeling=km.labeling, embedding=emb, kmeans=km, method=DFA)


def detect_both(
    A,
    K: int,
    ndfa_config: KMeansConfig | None = None,
    dfa_config: KMeansConfig | None = None,
) -> tuple[DetectionOutput, DetectionOutput]:
    """Run both pipelines on one adjacency, computing the eigenpairs once.

    Output is identical to calling :func:`ndfa` and :func:`dfa` separately
    (the spectral step is deterministic); this just avoids paying for the
    decomposition twice in paired experiments.
    """
    ndfa_config = _check_config(K, ndfa_config)
    dfa_config = _check_config(K, dfa_config)
    emb = embed(A, K)
    km_n = kmeans(emb.normalized, ndfa_config)
    km_d = kmeans(emb.vectors, dfa_config)
    return (
        DetectionOutput(labeling=km_n.labeling, embedding=emb, kmeans=km_n, method=NDFA),
        DetectionOutput(labeling=km_d.labeling, embedding=emb, kmeans=km_d, method=DFA),
    )
