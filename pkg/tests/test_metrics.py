from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcdfm.errors import DimensionMismatch, KTooLargeForExhaustive
from dcdfm.metrics import (
    bound_report,
    confusion_matrix,
    error_rate,
    worst_community_error,
)
from dcdfm.model import (
    Bernoulli,
    Labeling,
    WeightedAdjacency,
    expected_adjacency,
    sample_adjacency,
    variance_bound,
)

from conftest import (
    error_rate_brute,
    make_params,
    random_full_labels,
    random_params,
    worst_community_error_brute,
)


def lab(values, K=None):
    return Labeling.from_labels(values, K=K)


class TestErrorRate:
    def test_identity(self):
        a = lab([1, 2, 1, 2])
        assert error_rate(a, a) == 0.0

    def test_global_swap(self):
        truth = lab([1, 1, 2, 2])
        est = lab([2, 2, 1, 1])
        assert error_rate(est, truth) == 0.0

    def test_one_flipped_node(self):
        truth = lab([1, 1, 2, 2])
        est = lab([1, 1, 1, 2], K=2)
        expected = error_rate_brute(est, truth)
        assert expected == pytest.approx(0.5)
        assert error_rate(est, truth) == pytest.approx(expected)

    def test_matches_brute_force_random(self):
        rng = np.random.default_rng(30)
        for _ in range(50):
            n = int(rng.integers(4, 12))
            K = int(rng.integers(2, 4))
            truth = Labeling(random_full_labels(rng, n, K), K)
            est = Labeling(random_full_labels(rng, n, K), K)
            assert error_rate(est, truth) == pytest.approx(
                error_rate_brute(est, truth), abs=0
            )

    def test_large_k_uses_assignment_and_stays_exact(self):
        rng = np.random.default_rng(31)
        K, n = 9, 60
        truth = Labeling(random_full_labels(rng, n, K), K)
        est = Labeling(random_full_labels(rng, n, K), K)
        C = confusion_matrix(est, truth)
        ks = np.arange(K)
        best = max(int(C[ks, list(p)].sum()) for p in permutations(range(K)))
        assert error_rate(est, truth) == pytest.approx(2.0 * (n - best) / n)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            error_rate(lab([1, 2]), lab([1, 2, 1]))
        with pytest.raises(DimensionMismatch):
            error_rate(lab([1, 2, 3]), lab([1, 2, 2], K=2))

    def test_zero_iff_permutation(self):
        rng = np.random.default_rng(32)
        for _ in range(20):
            n = int(rng.integers(4, 15))
            K = int(rng.integers(2, 4))
            truth = Labeling(random_full_labels(rng, n, K), K)
            perm = rng.permutation(K) + 1
            est = Labeling(perm[truth.labels - 1], K)
            assert error_rate(est, truth) == 0.0
            # flip one node to break the equivalence
            flipped = truth.labels.copy()
            flipped[0] = flipped[0] % K + 1
            if np.bincount(flipped, minlength=K + 1)[1:].min() > 0:
                assert error_rate(Labeling(flipped, K), truth) > 0.0


class TestWorstCommunityError:
    def test_identity_and_relabel(self):
        truth = lab([1, 1, 2, 2])
        assert worst_community_error(truth, truth) == 0.0
        assert worst_community_error(lab([2, 2, 1, 1]), truth) == 0.0

    def test_single_move_value_fixed_by_enumeration(self):
        truth = lab([1, 1, 2, 2])
        est = lab([1, 2, 2, 2], K=2)
        oracle = worst_community_error_brute(est, truth)
        assert worst_community_error(est, truth) == pytest.approx(oracle)
        assert oracle == pytest.approx(0.5)

    def test_matches_brute_force_random(self):
        rng = np.random.default_rng(33)
        for _ in range(50):
            n = int(rng.integers(4, 12))
            K = int(rng.integers(2, 4))
            truth = Labeling(random_full_labels(rng, n, K), K)
            est = Labeling(random_full_labels(rng, n, K), K)
            assert worst_community_error(est, truth) == pytest.approx(
                worst_community_error_brute(est, truth), abs=0
            )

    def test_refuses_large_k(self):
        rng = np.random.default_rng(34)
        truth = Labeling(random_full_labels(rng, 40, 9), 9)
        with pytest.raises(KTooLargeForExhaustive):
            worst_community_error(truth, truth)


@settings(max_examples=40, deadline=None)
@given(
    labels=st.lists(st.integers(1, 3), min_size=3, max_size=10),
    seed=st.integers(0, 1000),
)
def test_property_metrics_invariant_under_relabeling(labels, seed):
    labels = np.asarray(labels)
    K = 3
    if len(set(labels.tolist())) != K:
        return
    rng = np.random.default_rng(seed)
    truth = Labeling(labels, K)
    est = Labeling(random_full_labels(rng, len(labels), K), K)
    perm_t = rng.permutation(K) + 1
    perm_e = rng.permutation(K) + 1
    truth2 = Labeling(perm_t[truth.labels - 1], K)
    est2 = Labeling(perm_e[est.labels - 1], K)
    assert error_rate(est, truth) == pytest.approx(error_rate(est2, truth2))
    assert worst_community_error(est, truth) == pytest.approx(
        worst_community_error(est2, truth2)
    )


class TestBoundReport:
    def test_rank_one_equality_case(self):
        # one community, constant weights: the gap bound is tight
        c, n = 0.8, 12
        params = make_params([1] * n, [[1.0]], [c] * n)
        A = sample_adjacency(expected_adjacency(params), Bernoulli(), seed=3)
        rep = bound_report(A, params, variance_bound(Bernoulli(), params))
        assert rep.spectral_gap == pytest.approx(c * c * n)
        assert rep.gap_lower_bound == pytest.approx(c * c * n)
        assert rep.variance_bound == 1.0
        assert rep.observed_deviation >= 0.0

    def test_gap_never_below_its_lower_bound(self):
        rng = np.random.default_rng(35)
        for _ in range(25):
            params = random_params(rng, n=int(rng.integers(20, 80)))
            A = WeightedAdjacency(np.zeros((params.labeling.n,) * 2))
            rep = bound_report(A, params, 1.0)
            assert rep.spectral_gap >= rep.gap_lower_bound * (1 - 1e-8)

    def test_fields_finite_nonnegative(self):
        rng = np.random.default_rng(36)
        params = random_params(rng, n=30, K=2)
        A = WeightedAdjacency(np.zeros((30, 30)))
        rep = bound_report(A, params, 1.0)
        for value in rep.as_dict().values():
            assert np.isfinite(value) and value >= 0.0

    def test_shape_mismatch(self):
        rng = np.random.default_rng(37)
        params = random_params(rng, n=10, K=2)
        A = WeightedAdjacency(np.zeros((4, 4)))
        with pytest.raises(DimensionMismatch):
            bound_report(A, params, 1.0)
