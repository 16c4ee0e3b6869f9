"""Shared fixtures and independent oracle helpers.

The oracles here deliberately avoid the library's own code paths: looped
construction instead of vectorisation, explicit permutation-matrix
enumeration instead of confusion-matrix shortcuts, and exhaustive partition
search for small k-means instances.
"""

from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import settings

from dcdfm.model import (
    ConnectivityMatrix,
    Heterogeneity,
    Labeling,
    ModelParams,
)

# property tests must not flake between runs; examples are still varied
# within a run by the strategies themselves
settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")


def make_params(labels, P, theta, K=None):
    labels = np.asarray(labels)
    K = int(labels.max()) if K is None else K
    return ModelParams(
        K=K,
        labeling=Labeling(labels, K),
        P=ConnectivityMatrix(np.asarray(P, dtype=float)),
        theta=Heterogeneity(np.asarray(theta, dtype=float)),
    )


def random_connectivity(rng, K, min_rel_gap=0.05):
    """Random symmetric full-rank K-by-K matrix with max |entry| = 1."""
    while True:
        B = rng.uniform(-1.0, 1.0, size=(K, K))
        P = (B + B.T) / 2.0
        P = P / np.abs(P).max()
        s = np.linalg.svd(P, compute_uv=False)
        if s[-1] > min_rel_gap * s[0]:
            return P


def random_full_labels(rng, n, K):
    labels = rng.integers(1, K + 1, size=n)
    while np.bincount(labels, minlength=K + 1)[1:].min() == 0:
        labels = rng.integers(1, K + 1, size=n)
    return labels.astype(np.int64)


def random_params(rng, n=None, K=None, rho=1.0):
    """A random valid model: random P, uniform labels, theta bounded away from 0."""
    n = int(rng.integers(20, 201)) if n is None else n
    K = int(rng.choice([2, 3, 4])) if K is None else K
    labels = random_full_labels(rng, n, K)
    theta = rho * rng.random(n) + 0.05 * rho
    return make_params(labels, random_connectivity(rng, K), theta, K=K)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def omega_loop(params):
    """Entrywise triple-loop expectation matrix."""
    n = params.labeling.n
    out = np.empty((n, n))
    theta = params.theta.theta
    lab = params.labeling.labels
    P = params.P.matrix
    for i in range(n):
        for j in range(n):
            out[i, j] = theta[i] * theta[j] * P[lab[i] - 1, lab[j] - 1]
    return out


def one_hot(labels, K):
    n = len(labels)
    Z = np.zeros((n, K))
    for i, v in enumerate(labels):
        Z[i, v - 1] = 1.0
    return Z


def error_rate_brute(est, truth):
    """min over permutation matrices J of count(Zhat J != Z) / n."""
    K = truth.K
    Z = one_hot(truth.labels, K)
    Zhat = one_hot(est.labels, K)
    best = None
    for perm in permutations(range(K)):
        J = np.zeros((K, K))
        for a, b in enumerate(perm):
            J[a, b] = 1.0
        diff = int(np.sum(Zhat @ J != Z))
        best = diff if best is None or diff < best else best
    return best / truth.n


def worst_community_error_brute(est, truth):
    """Literal set-based min-max confusion over all K! matchings."""
    K = truth.K
    nodes = range(truth.n)
    C = [set(i for i in nodes if truth.labels[i] == k + 1) for k in range(K)]
    Chat = [set(i for i in nodes if est.labels[i] == k + 1) for k in range(K)]
    allset = set(nodes)
    best = None
    for perm in permutations(range(K)):
        worst = 0.0
        for k in range(K):
            missed = len(C[k] & (allset - Chat[perm[k]]))
            intruders = len((allset - C[k]) & Chat[perm[k]])
            worst = max(worst, (missed + intruders) / len(C[k]))
        best = worst if best is None or worst < best else best
    return best


def kmeans_brute(points, K):
    """Exhaustive optimal K-partition of tiny point sets.

    Returns (objective, partition) with the partition as a frozenset of
    frozensets of point indices.
    """
    points = np.asarray(points, dtype=float)
    n = len(points)
    best_obj, best_part = None, None
    for assign in product(range(K), repeat=n):
        if len(set(assign)) != K:
            continue
        obj = 0.0
        for k in range(K):
            members = [i for i in range(n) if assign[i] == k]
            center = points[members].mean(axis=0)
            obj += sum(float(np.sum((points[i] - center) ** 2)) for i in members)
        if best_obj is None or obj < best_obj:
            best_obj = obj
            best_part = frozenset(
                frozenset(i for i in range(n) if assign[i] == k) for k in range(K)
            )
    return best_obj, best_part


def partition_of(labels):
    values = sorted(set(int(v) for v in labels))
    return frozenset(
        frozenset(i for i, v in enumerate(labels) if v == value) for value in values
    )


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def karate_dataset():
    """Zachary's karate club as a parsed dataset (built via networkx)."""
    networkx = pytest.importorskip("networkx")
    from dcdfm.model import WeightedAdjacency
    from dcdfm.netio import NetworkDataset, parse_gml, write_gml

    g = networkx.karate_club_graph()
    n = g.number_of_nodes()
    A = np.zeros((n, n))
    for u, v in g.edges():
        A[u, v] = 1.0
        A[v, u] = 1.0
    labels = [1 if g.nodes[i]["club"] == "Mr. Hi" else 2 for i in range(n)]
    ds = NetworkDataset(
        name="karate",
        adjacency=WeightedAdjacency(A),
        truth=Labeling.from_labels(labels, K=2),
        node_ids=tuple(range(n)),
    )
    # round through our own GML subset so tests exercise the parser
    return parse_gml(write_gml(ds), name="karate")
