"""Model parameters, validation, expectation matrix, and edge-weight sampling.

The generative model: ``n`` nodes split into ``K`` non-overlapping
communities (labels 1..K), a symmetric full-rank K-by-K connectivity matrix
``P`` with max absolute entry 1, and a positive per-node weight vector
``theta``.  The expected adjacency is

    E[A(i, j)] = theta(i) * theta(j) * P(label(i), label(j))

for every ordered pair including the diagonal.  Edge weights are drawn
independently (up to symmetry) from one of four mean-parameterised families:
normal, binomial, Bernoulli, or Poisson.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import make_rng
from .errors import (
    AsymmetricP,
    DimensionMismatch,
    DistributionDomainViolation,
    EmptyCommunity,
    InvalidParams,
    NonpositiveTheta,
    RankDeficientP,
    UnnormalizedP,
)

# Validation tolerances: rank is judged relative to the largest singular
# value (scale-free), normalisation absolutely.
RANK_TOL = 1e-10
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Labeling:
    """Community assignment: ``labels[i]`` in 1..K for each of n nodes.

    The raw constructor only coerces types; use :func:`validate_params` or
    :meth:`from_labels` to enforce invariants (every community non-empty).
    """

    labels: np.ndarray
    K: int

    def __post_init__(self):
        arr = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "labels", arr)
        object.__setattr__(self, "K", int(self.K))

    @classmethod
    def from_labels(cls, labels, K=None) -> "Labeling":
        """Build and validate a labeling; raises EmptyCommunity on gaps."""
        lab = cls(np.asarray(labels), K if K is not None else int(np.max(labels)))
        problems = lab.check()
        if problems:
            raise problems[0]
        return lab

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def sizes(self) -> np.ndarray:
        """Community sizes n_1..n_K."""
        return np.bincount(self.labels, minlength=self.K + 1)[1:]

    @property
    def n_min(self) -> int:
        return int(self.sizes.min())

    @property
    def n_max(self) -> int:
        return int(self.sizes.max())

    def membership_matrix(self) -> np.ndarray:
        """One-hot n-by-K matrix Z with Z[i, labels[i]-1] = 1."""
        Z = np.zeros((self.n, self.K), dtype=np.float64)
        Z[np.arange(self.n), self.labels - 1] = 1.0
        return Z

    def check(self) -> list:
        out = []
        if self.n == 0:
            out.append(EmptyCommunity("labeling has no nodes"))
            return out
        if self.K < 1:
            out.append(EmptyCommunity(f"K={self.K} must be at least 1"))
            return out
        if self.labels.min() < 1 or self.labels.max() > self.K:
            out.append(
                EmptyCommunity(
                    f"labels must lie in 1..{self.K}, found range "
                    f"[{self.labels.min()}, {self.labels.max()}]"
                )
            )
            return out
        empty = np.flatnonzero(self.sizes == 0) + 1
        if empty.size:
            out.append(EmptyCommunity(f"communities with no members: {empty.tolist()}"))
        return out


@dataclass(frozen=True, eq=False)
class ConnectivityMatrix:
    """Symmetric full-rank K-by-K matrix of community interaction levels.

    Entries may be negative; the largest absolute entry must equal 1.
    """

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"connectivity matrix must be square, got {arr.shape}")
        object.__setattr__(self, "matrix", arr)

    @property
    def K(self) -> int:
        return self.matrix.shape[0]

    def smallest_eigenvalue_magnitude(self) -> float:
        """|lambda_K|: magnitude of the least-magnitude eigenvalue."""
        return float(np.abs(np.linalg.eigvalsh(self.matrix)).min())

    def check(self) -> list:
        out = []
        P = self.matrix
        if not np.all(np.isfinite(P)):
            out.append(AsymmetricP("connectivity matrix has non-finite entries"))
            return out
        if not np.array_equal(P, P.T):
            out.append(AsymmetricP("connectivity matrix is not symmetric"))
        s = np.linalg.svd(P, compute_uv=False)
        if s[0] == 0.0 or s[-1] < RANK_TOL * s[0]:
            out.append(
                RankDeficientP(
                    f"smallest/largest singular value ratio "
                    f"{0.0 if s[0] == 0 else s[-1] / s[0]:.3e} below {RANK_TOL:g}"
                )
            )
        maxabs = np.abs(P).max()
        if abs(maxabs - 1.0) > NORMALIZATION_TOL:
            out.append(UnnormalizedP(f"max |entry| is {maxabs!r}, expected 1"))
        return out


@dataclass(frozen=True, eq=False)
class Heterogeneity:
    """Positive per-node degree weights."""

    theta: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "theta", np.asarray(self.theta, dtype=np.float64).reshape(-1)
        )

    @property
    def n(self) -> int:
        return self.theta.shape[0]

    @property
    def theta_max(self) -> float:
        return float(self.theta.max())

    @property
    def theta_min(self) -> float:
        return float(self.theta.min())

    @property
    def l1(self) -> float:
        """Sum of the weights (the l1 norm, all entries being positive)."""
        return float(self.theta.sum())

    def check(self) -> list:
        if self.n == 0:
            return [NonpositiveTheta("weight vector is empty")]
        if not np.all(np.isfinite(self.theta)) or self.theta.min() <= 0.0:
            return [NonpositiveTheta(f"min weight is {self.theta.min()!r}, must be > 0")]
        return []


@dataclass(frozen=True, eq=False)
class ModelParams:
    """A full parameter set (K, labeling, connectivity, weights)."""

    K: int
    labeling: Labeling
    P: ConnectivityMatrix
    theta: Heterogeneity


@dataclass(frozen=True, eq=False)
class WeightedAdjacency:
    """Symmetric real edge-weight matrix; entries may be negative."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"adjacency must be square, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("adjacency entries must be finite")
        if not np.array_equal(arr, arr.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "matrix", arr)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.matrix).max()) if self.n else 0.0


@dataclass(frozen=True)
class Normal:
    """Normal edge weights with fixed variance; means may be negative."""

    sigma2: float

    def __post_init__(self):
        if not (self.sigma2 > 0):
            raise ValueError(f"sigma2 must be positive, got {self.sigma2!r}")


@dataclass(frozen=True)
class Binomial:
    """Binomial(m, mean/m) edge weights; means must lie in [0, m]."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"trial count m must be an integer >= 1, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class Bernoulli:
    """0/1 edge weights; means must lie in [0, 1]."""


@dataclass(frozen=True)
class Poisson:
    """Count edge weights; means must be non-negative."""


EdgeDistribution = Normal | Binomial | Bernoulli | Poisson

_FAMILIES = {"normal": Normal, "binomial": Binomial, "bernoulli": Bernoulli, "poisson": Poisson}


def make_distribution(family: str, *, sigma2=None, m=None) -> EdgeDistribution:
    """Build an EdgeDistribution from a family name and its parameter."""
    fam = family.strip().lower()
    if fam not in _FAMILIES:
        raise ValueError(f"unknown distribution family {family!r}; expected one of {sorted(_FAMILIES)}")
    if fam == "normal":
        if sigma2 is None:
            raise ValueError("normal distribution needs sigma2")
        return Normal(float(sigma2))
    if fam == "binomial":
        if m is None:
            raise ValueError("binomial distribution needs m")
        return Binomial(int(m))
    return _FAMILIES[fam]()


def check_params(params: ModelParams) -> list:
    """Collect every violated invariant of ``params`` (empty when valid)."""
    out = []
    out.extend(params.labeling.check())
    out.extend(params.P.check())
    out.extend(params.theta.check())
    if params.labeling.K != params.K:
        out.append(
            DimensionMismatch(f"labeling.K={params.labeling.K} differs from K={params.K}")
        )
    if params.P.K != params.K:
        out.append(DimensionMismatch(f"P is {params.P.K}x{params.P.K} but K={params.K}"))
    if params.theta.n != params.labeling.n:
        out.append(
            DimensionMismatch(
                f"theta has {params.theta.n} entries for {params.labeling.n} nodes"
            )
        )
    return out


def validate_params(params: ModelParams) -> ModelParams:
    """Return ``params`` if every invariant holds, else raise InvalidParams.

    The raised error carries the complete list of violations.
    """
    problems = check_params(params)
    if problems:
        raise InvalidParams(problems)
    return params


def expected_adjacency(params: ModelParams) -> np.ndarray:
    """The n-by-n expectation matrix theta_i theta_j P(label_i, label_j).

    Symmetric with rank K; includes the diagonal.
    """
    validate_params(params)
    lab = params.labeling.labels - 1
    theta = params.theta.theta
    blocks = params.P.matrix[np.ix_(lab, lab)]
    return (theta[:, None] * theta[None, :]) * blocks


def _first_violation(mask: np.ndarray, omega: np.ndarray, reason: str):
    i, j = map(int, np.argwhere(mask)[0])
    raise DistributionDomainViolation(
        f"mean at ({i}, {j}) is {omega[i, j]!r}: {reason}",
        i=i,
        j=j,
        value=float(omega[i, j]),
    )


def sample_adjacency(
    omega: np.ndarray,
    dist: EdgeDistribution,
    seed,
    *,
    saturate: bool = False,
) -> WeightedAdjacency:
    """Draw a symmetric adjacency with entrywise means ``omega``.

    The upper triangle including the diagonal is sampled independently and
    mirrored, so the result is exactly symmetric and bitwise reproducible
    for a given seed.  Domain checks are eager: any mean outside the
    distribution's domain fails the whole sample (no silent repair).

    ``saturate=True`` clips binomial/Bernoulli success probabilities into
    [0, 1] instead of failing.  That biases E[A] wherever clipping occurs;
    it exists for benchmark sweeps whose sparsity scaling pushes means past
    the domain edge, and is off by default.
    """
    omega = np.asarray(omega, dtype=np.float64)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise DimensionMismatch(f"mean matrix must be square, got {omega.shape}")
    rng = make_rng(seed)
    n = omega.shape[0]
    iu, ju = np.triu_indices(n)
    means = omega[iu, ju]

    if isinstance(dist, Normal):
        vals = rng.normal(loc=means, scale=np.sqrt(dist.sigma2))
    elif isinstance(dist, Binomial):
        p = means / dist.m
        if saturate:
            p = np.clip(p, 0.0, 1.0)
        elif np.any((omega < 0) | (omega > dist.m)):
            _first_violation(
                (omega < 0) | (omega > dist.m), omega, f"binomial mean must be in [0, {dist.m}]"
            )
        vals = rng.binomial(dist.m, p).astype(np.float64)
    elif isinstance(dist, Bernoulli):
        p = means
        if saturate:
            p = np.clip(p, 0.0, 1.0)
        elif np.any((omega < 0) | (omega > 1)):
            _first_violation((omega < 0) | (omega > 1), omega, "Bernoulli mean must be in [0, 1]")
        vals = rng.binomial(1, p).astype(np.float64)
    elif isinstance(dist, Poisson):
        if np.any(omega < 0):
            _first_violation(omega < 0, omega, "Poisson mean must be >= 0")
        vals = rng.poisson(means).astype(np.float64)
    else:
        raise TypeError(f"unknown distribution {dist!r}")

    A = np.zeros((n, n), dtype=np.float64)
    A[iu, ju] = vals
    A[ju, iu] = vals
    return WeightedAdjacency(A)


def variance_bound(dist: EdgeDistribution, params: ModelParams) -> float:
    """Upper bound on max over pairs of Var(A(i,j)) / (theta_i theta_j).

    Mean-parameterised binomial, Bernoulli, and Poisson families all admit
    the bound 1; the normal family's variance is constant, so the bound is
    sigma2 / theta_min**2.
    """
    if isinstance(dist, Normal):
        return dist.sigma2 / params.theta.theta_min**2
    if isinstance(dist, (Binomial, Bernoulli, Poisson)):
        return 1.0
    raise TypeError(f"unknown distribution {dist!r}")
