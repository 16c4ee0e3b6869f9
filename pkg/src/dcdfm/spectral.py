"""Dense symmetric eigendecomposition and eigenvector row normalization.

Everything here is deterministic: the full decomposition comes from LAPACK's
dense symmetric driver (via ``numpy.linalg.eigh``), the leading-K selection
orders by eigenvalue magnitude with a fixed tie rule, and each eigenvector's
sign is pinned by its largest-magnitude entry.  Problem sizes in this
package stay dense-friendly (n up to a few thousand), where the O(n^3) full
solve is cheap and exactly repeatable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceFailure, KOutOfRange

# Rows of the eigenvector matrix with norm below this are treated as
# carrying no signal and replaced by a constant unit row.
DEGENERATE_ROW_TOL = 1e-12

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralEmbedding:
    """Leading-K eigenpairs of a symmetric matrix.

    ``eigenvalues`` are signed, ordered by descending magnitude.
    ``vectors`` has orthonormal columns.  ``normalized`` (filled by
    :func:`normalize_embedding`) holds the row-normalized copy used by the
    degree-corrected pipeline; ``degenerate_rows`` lists rows whose norm was
    too small to normalize and that received the constant fallback row.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    normalized: np.ndarray | None = None
    degenerate_rows: tuple[int, ...] = ()

    @property
    def K(self) -> int:
        return self.vectors.shape[1]

    @property
    def n(self) -> int:
        return self.vectors.shape[0]


def leading_eigs(M: np.ndarray, K: int) -> SpectralEmbedding:
    """Eigenpairs of the K largest-magnitude eigenvalues of symmetric ``M``.

    ``M`` is symmetrized as (M + M') / 2 after an asymmetry check.  Magnitude
    ties are broken positive-eigenvalue-first, then by ascending position in
    the ascending-eigenvalue ordering.  Each returned eigenvector is signed
    so its largest-magnitude entry (lowest index on ties) is positive.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if not 1 <= K <= n:
        raise KOutOfRange(f"K={K} outside [1, {n}]")
    asym = np.abs(M - M.T).max() if n else 0.0
    scale = max(1.0, float(np.abs(M).max())) if n else 1.0
    if asym > SYMMETRY_TOL * scale:
        raise ValueError(f"matrix asymmetry {asym:.3e} exceeds tolerance")
    S = (M + M.T) / 2.0

    try:
        w, V = np.linalg.eigh(S)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc

    order = sorted(range(n), key=lambda i: (-abs(w[i]), 0 if w[i] > 0 else 1, i))[:K]
    vals = w[order].copy()
    vecs = V[:, order].copy()
    for k in range(K):
        col = vecs[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            vecs[:, k] = -col
    return SpectralEmbedding(eigenvalues=vals, vectors=vecs)


def row_normalize(U: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Divide each row of ``U`` by its Euclidean norm.

    Rows with norm below ``DEGENERATE_ROW_TOL`` cannot be normalized; they
    are replaced by the constant unit row (1/sqrt(K), ..., 1/sqrt(K)) and
    their indices reported, so every node still receives a (deterministic)
    position instead of being dropped.
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {U.shape}")
    K = U.shape[1]
    norms = np.linalg.norm(U, axis=1)
    degenerate = norms < DEGENERATE_ROW_TOL
    safe = np.where(degenerate, 1.0, norms)
    out = U / safe[:, None]
    out[degenerate, :] = 1.0 / np.sqrt(K)
    return out, tuple(int(i) for i in np.flatnonzero(degenerate))


def normalize_embedding(emb: SpectralEmbedding) -> SpectralEmbedding:
    """Return a copy of ``emb`` with the row-normalized matrix filled in."""
    normalized, degenerate = row_normalize(emb.vectors)
    return replace(emb, normalized=normalized, degenerate_rows=degenerate)


def spectral_norm(M: np.ndarray) -> float:
    """Largest eigenvalue magnitude of a symmetric matrix."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return 0.0
    S = (M + M.T) / 2.0
    try:
        w = np.linalg.eigvalsh(S)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return float(np.abs(w).max())
