import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rinmf.errors import DomainError
from rinmf.grouping import (
    RuleGrouping,
    build_A,
    build_ideal,
    cluster_assignment,
    induced_clusters,
    kmeans,
    kmeans_rules,
    kmeans_rules_supervised,
    rfa_assign,
    support_vectors,
)
from rinmf.rules import build_P

from conftest import make_rules


def kmeans_cost(points, labels):
    cost = 0.0
    for z in set(labels):
        pts = points[np.array(labels) == z]
        cost += ((pts - pts.mean(axis=0)) ** 2).sum()
    return cost


def test_kmeans_k1_groups_everything():
    rs = make_rules(5, [{0}, {1, 2}, {3, 4}])
    g = kmeans_rules(rs, 1, seed=0)
    assert g.assignment == (0, 0, 0)
    assert g.clusters == (frozenset(range(5)),)


def test_kmeans_two_identical_sets_matches_enumeration():
    supports = [{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {5, 6}, {5, 6}]
    rs = make_rules(8, supports)
    pts = support_vectors(rs)
    best = min(
        kmeans_cost(pts, labels)
        for labels in itertools.product([0, 1], repeat=len(supports))
        if len(set(labels)) == 2
    )
    assert best == 0.0
    for seed in range(5):
        g = kmeans_rules(rs, 2, seed=seed)
        assert kmeans_cost(pts, g.assignment) == best
        assert len({g.assignment[0], g.assignment[1], g.assignment[2]}) == 1
        assert g.assignment[3] == g.assignment[4] != g.assignment[0]


def test_kmeans_k_equals_rules_gives_singletons():
    rs = make_rules(6, [{0, 1}, {0, 1}, {2}, {3, 4, 5}])
    g = kmeans_rules(rs, 4, seed=3)
    assert sorted(g.assignment) == [0, 1, 2, 3]


def test_kmeans_errors():
    rs = make_rules(3, [{0}, {1}])
    with pytest.raises(DomainError):
        kmeans_rules(rs, 3)


def test_kmeans_deterministic_given_seed(rng):
    supports = [set(np.flatnonzero(rng.random(20) < 0.4).tolist()) or {0} for _ in range(15)]
    rs = make_rules(20, supports)
    assert kmeans_rules(rs, 4, seed=7) == kmeans_rules(rs, 4, seed=7)


@given(st.integers(0, 10_000), st.integers(1, 5))
def test_kmeans_objective_non_increasing(seed, k):
    rng = np.random.default_rng(seed)
    pts = (rng.random((12, 10)) < 0.4).astype(float)
    res = kmeans(pts, k, max_iters=100, seed=seed)
    assert all(b <= a + 1e-12 for a, b in zip(res.trace, res.trace[1:]))
    assert res.n_iter <= 100
    assert len(set(res.labels.tolist())) == k


def test_supervised_one_factor_per_class():
    rs = make_rules(6, [{0, 1}, {1, 2}, {3, 4}, {5}], labels=["a", "a", "b", "b"])
    g = kmeans_rules_supervised(rs, {"a": 1, "b": 1}, seed=0)
    assert g.assignment == (0, 0, 1, 1)
    assert g.clusters == (frozenset({0, 1, 2}), frozenset({3, 4, 5}))


def test_supervised_singleton_class():
    rs = make_rules(4, [{0, 1}, {2, 3}], labels=["a", "b"])
    g = kmeans_rules_supervised(rs, {"a": 1, "b": 1}, seed=0)
    assert g.clusters == (frozenset({0, 1}), frozenset({2, 3}))


def test_supervised_single_class_matches_unsupervised():
    supports = [{0, 1}, {0, 1, 2}, {5, 6}, {6, 7}]
    rs = make_rules(8, supports, labels=["c1"] * 4)
    assert kmeans_rules_supervised(rs, {"c1": 2}, seed=4) == kmeans_rules(rs, 2, seed=4)


def test_supervised_errors():
    rs = make_rules(4, [{0}, {1}], labels=["a", None])
    with pytest.raises(DomainError):
        kmeans_rules_supervised(rs, {"a": 1})
    rs = make_rules(4, [{0}, {1}], labels=["a", "b"])
    with pytest.raises(DomainError):
        kmeans_rules_supervised(rs, {"a": 1})


def test_rfa_disjoint_rules_become_centroids():
    rs = make_rules(6, [{0, 1}, {2, 3}, {4, 5}], labels=["a", "b", "c"])
    f_init = np.full((6, 3), 0.1)
    g = rfa_assign(rs, f_init, 3, class_count=3)
    assert sorted(g.assignment) == [0, 1, 2]
    assert sorted(map(sorted, g.clusters)) == [[0, 1], [2, 3], [4, 5]]


@pytest.mark.parametrize("swap", [False, True])
def test_rfa_hand_simulated(swap):
    # r0, r1 share {0,1,2}; r2, r3 share {4,5,6}
    rs = make_rules(8, [{0, 1, 2}, {0, 1, 2}, {4, 5, 6}, {4, 5, 6}])
    f_init = np.full((8, 2), 0.5)
    f_init[[0, 1, 2]] = [1.0, 0.1]
    f_init[[4, 5, 6]] = [0.1, 1.0]
    if swap:
        f_init = f_init[:, ::-1]
    g = rfa_assign(rs, f_init, 2, class_count=0)
    # r0 is the best rule (largest support, lowest index) and claims the factor it
    # overlaps; r2 is least similar to r0 and takes the other factor; r1, r3 follow
    # their centroids
    z0 = 1 if swap else 0
    assert g.assignment == (z0, z0, 1 - z0, 1 - z0)


def test_rfa_uses_quality_and_errors():
    rs = make_rules(4, [{0, 1, 2}, {3}], qualities=[0.1, 0.9])
    f_init = np.array([[1, 0.1], [1, 0.1], [1, 0.1], [0.1, 1]])
    g = rfa_assign(rs, f_init, 2)
    assert g.assignment == (0, 1)
    with pytest.raises(DomainError):
        rfa_assign(rs, np.ones((4, 3)), 3)


@given(st.integers(0, 10_000))
def test_rfa_assigns_every_rule_and_factor(seed):
    rng = np.random.default_rng(seed)
    m, n_rules = 10, int(rng.integers(3, 9))
    k = int(rng.integers(1, n_rules + 1))
    supports = [set(np.flatnonzero(rng.random(m) < 0.4).tolist()) or {0} for _ in range(n_rules)]
    rs = make_rules(m, supports)
    g = rfa_assign(rs, rng.uniform(size=(m, k)), k)
    assert len(g.assignment) == n_rules
    assert set(g.assignment) == set(range(k))


def test_build_ideal_examples():
    g = RuleGrouping(2, (), (frozenset({0, 1}), frozenset({2})))
    assert build_ideal(g, 3).tolist() == [[1, 0], [1, 0], [0, 1]]
    g = RuleGrouping(2, (), (frozenset({0, 1}), frozenset({1})))
    assert build_ideal(g, 3)[1].tolist() == [1, 1]
    g = RuleGrouping(2, (), (frozenset({0}), frozenset()))
    assert build_ideal(g, 3)[:, 1].tolist() == [0, 0, 0]


def brute_force_A(clusters, supports):
    return np.array([[len(set(c) & set(s)) for s in supports] for c in clusters], dtype=float)


def test_build_A_example():
    rs = make_rules(3, [{0, 1}, {1, 2}])
    g = RuleGrouping(2, (0, 1), (frozenset({0, 1}), frozenset({2})))
    assert build_A(g, rs).tolist() == [[2, 1], [0, 1]]
    assert build_A(g, rs).tolist() == brute_force_A(g.clusters, [{0, 1}, {1, 2}]).tolist()


@given(st.integers(0, 10_000))
def test_build_A_is_ideal_transpose_times_P(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 12))
    supports = [set(np.flatnonzero(rng.random(m) < 0.5).tolist()) or {0} for _ in range(6)]
    rs = make_rules(m, supports)
    k = int(rng.integers(1, 4))
    g = RuleGrouping.from_assignment(rs, rng.integers(0, k, 6), k)
    A = build_A(g, rs)
    assert np.array_equal(A, build_ideal(g, m).T @ build_P(rs))
    sizes = np.array([len(c) for c in g.clusters])[:, None]
    assert np.all(A <= np.minimum(sizes, [len(s) for s in supports]))


def test_cluster_assignment_examples():
    sets, fc = cluster_assignment([[0.9, 0.5, 0.1]])
    assert sets == [frozenset({0, 1})]
    assert fc.tolist() == [[1, 1, 0]]
    sets, _ = cluster_assignment([[0.3, 0.3, 0.3]])
    assert sets == [frozenset({0, 1, 2})]
    sets, fc = cluster_assignment([[0.0, 0.0]])
    assert sets == [frozenset()] and fc.tolist() == [[0, 0]]


@given(st.integers(0, 10_000))
def test_cluster_assignment_identity_on_ideal(seed):
    rng = np.random.default_rng(seed)
    ideal = (rng.random((8, 3)) < 0.4).astype(float)
    _, fc = cluster_assignment(ideal)
    assert np.array_equal(fc, ideal)
    g = RuleGrouping(3, (), tuple(induced_clusters(fc)))
    assert np.array_equal(build_ideal(g, 8), ideal)
