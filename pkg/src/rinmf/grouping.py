"""From rules to factor constraints: rule clustering, ideal and cost matrices.

Also maps a learned ``F`` back to the entity clustering it induces (an entity
joins factor ``j`` when its loading is at least half of its largest loading).
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rules import RuleSet, build_P


@dataclass(frozen=True)
class RuleGrouping:
    k: int
    assignment: tuple
    clusters: tuple

    @classmethod
    def from_assignment(cls, rs, assignment, k):
        assignment = tuple(int(a) for a in assignment)
        if len(assignment) != len(rs):
            raise DomainError("assignment length differs from the number of rules")
        if any(not 0 <= a < k for a in assignment):
            raise DomainError(f"assignment refers to a factor outside [0, {k})")
        clusters = [set() for _ in range(k)]
        for r, z in zip(rs.rules, assignment):
            clusters[z] |= r.support
        return cls(k, assignment, tuple(frozenset(c) for c in clusters))

    def rules_of(self, z):
        return [j for j, a in enumerate(self.assignment) if a == z]


@dataclass
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    objective: float
    trace: list
    n_iter: int


def _sq_dists(points, centers):
    d = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return d


def _kmeans_pp(points, k, rng):
    n = len(points)
    first = int(rng.integers(n))
    centers = [points[first]]
    chosen = {first}
    for _ in range(1, k):
        d = _sq_dists(points, np.array(centers)).min(axis=1)
        total = d.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d / total))
        else:
            # every point already sits on a center
            idx = next((i for i in range(n) if i not in chosen), 0)
        chosen.add(idx)
        centers.append(points[idx])
    return np.array(centers, dtype=float)


def _repair_empty(points, labels, centers, k):
    """Move the worst-fitting point of a multi-member cluster into each empty cluster."""
    for z in range(k):
        if np.any(labels == z):
            continue
        sizes = np.bincount(labels, minlength=k)
        movable = sizes[labels] > 1
        if not movable.any():
            break
        d = ((points - centers[labels]) ** 2).sum(axis=1)
        d[~movable] = -1.0
        p = int(np.argmax(d))
        labels[p] = z
        centers[z] = points[p]
    return labels


def kmeans(points, k, max_iters=100, seed=None, n_init=1):
    """Lloyd's k-means with k-means++ seeding; ties go to the lowest index.

    Returns the best of ``n_init`` runs; each run's objective is recorded once
    per iteration in ``trace``.
    """
    points = np.asarray(points, dtype=float)
    n = len(points)
    if not 1 <= k <= n:
        raise DomainError(f"k={k} must lie in [1, {n}]")
    seeds = np.random.SeedSequence(seed).spawn(n_init)
    best = None
    for ss in seeds:
        rng = np.random.default_rng(ss)
        centers = _kmeans_pp(points, k, rng)
        labels = None
        trace = []
        it = 0
        for it in range(1, max_iters + 1):
            new = np.argmin(_sq_dists(points, centers), axis=1)
            new = _repair_empty(points, new, centers, k)
            trace.append(float(((points - centers[new]) ** 2).sum()))
            for z in range(k):
                centers[z] = points[new == z].mean(axis=0)
            if labels is not None and np.array_equal(new, labels):
                labels = new
                break
            labels = new
        obj = float(((points - centers[labels]) ** 2).sum())
        trace.append(obj)
        if best is None or obj < best.objective:
            best = KMeansResult(labels.copy(), centers.copy(), obj, trace, it)
    return best


def support_vectors(rs):
    """Binary entity-indicator vector of every rule's support, one row per rule."""
    return build_P(rs).T


def kmeans_rules(rs, k, max_iters=100, seed=None, n_init=10):
    if not 1 <= k <= len(rs):
        raise DomainError(f"k={k} must lie in [1, {len(rs)}] (number of rules)")
    res = kmeans(support_vectors(rs), k, max_iters=max_iters, seed=seed, n_init=n_init)
    return RuleGrouping.from_assignment(rs, res.labels, k)


def kmeans_rules_supervised(rs, per_class_k, max_iters=100, seed=None, n_init=10):
    """Cluster each target class separately; factors are numbered in ``per_class_k`` order."""
    for r in rs.rules:
        if r.label is None:
            raise DomainError(f"rule {r.id!r} has no label")
        if r.label not in per_class_k:
            raise DomainError(f"no factor count given for label {r.label!r}")
    assignment = [None] * len(rs)
    offset = 0
    for label, kc in per_class_k.items():
        idx = [j for j, r in enumerate(rs.rules) if r.label == label]
        if not idx:
            raise DomainError(f"label {label!r} has no rules")
        sub = RuleSet(rs.m, [rs.rules[j] for j in idx])
        g = kmeans_rules(sub, kc, max_iters=max_iters, seed=seed, n_init=n_init)
        for j, a in zip(idx, g.assignment):
            assignment[j] = offset + a
        offset += kc
    return RuleGrouping.from_assignment(rs, assignment, offset)


def jaccard(a, b):
    a, b = set(a), set(b)
    union = len(a | b)
    return 1.0 if union == 0 else len(a & b) / union


def rfa_assign(rs, f_init, k, class_count=0):
    """Rule-to-factor assignment seeded by representative rules.

    Representative rules (one per class, or the single best rule when
    ``class_count`` is 0) claim the initial factor they overlap most. Free
    factors are then given to the rules least similar to the current
    centroids, and every other rule joins the factor whose centroid rule it
    resembles most (entity Jaccard). Rule quality is ``Rule.quality`` with
    the support size as fallback.
    """
    n_rules = len(rs)
    if k > n_rules:
        raise DomainError(f"cannot assign {n_rules} rules to {k} factors")
    f_init = np.asarray(f_init, dtype=float)
    if f_init.shape != (rs.m, k):
        raise DomainError(f"f_init has shape {f_init.shape}, expected {(rs.m, k)}")
    factor_support = induced_clusters(cluster_assignment(f_init)[1])

    def quality(j):
        r = rs.rules[j]
        return r.quality if r.quality is not None else float(len(r.support))

    def best_rule(candidates):
        return max(candidates, key=lambda j: (quality(j), -j))

    centroid_of = {}  # factor -> rule index

    def claim_free_factor(j):
        supp = rs.rules[j].support
        free = [z for z in range(k) if z not in centroid_of]
        z = max(free, key=lambda z: (len(supp & factor_support[z]) / len(supp), -z))
        centroid_of[z] = j

    if class_count > 0:
        labels = rs.labels
        if any(r.label is None for r in rs.rules):
            raise DomainError("supervised assignment needs every rule labelled")
        if len(labels) != class_count:
            raise DomainError(f"found {len(labels)} labels, class_count={class_count}")
        if class_count > k:
            raise DomainError(f"class_count={class_count} exceeds k={k}")
        for label in labels:
            claim_free_factor(best_rule([j for j in range(n_rules) if rs.rules[j].label == label]))
    else:
        claim_free_factor(best_rule(range(n_rules)))

    while len(centroid_of) < k:
        centroids = list(centroid_of.values())
        rest = [j for j in range(n_rules) if j not in centroids]
        j = min(
            rest,
            key=lambda j: (max(jaccard(rs.rules[j].support, rs.rules[c].support) for c in centroids), j),
        )
        claim_free_factor(j)

    assignment = [None] * n_rules
    for z, j in centroid_of.items():
        assignment[j] = z
    for j in range(n_rules):
        if assignment[j] is not None:
            continue
        supp = rs.rules[j].support
        assignment[j] = max(
            range(k), key=lambda z: (jaccard(supp, rs.rules[centroid_of[z]].support), -z)
        )
    return RuleGrouping.from_assignment(rs, assignment, k)


def build_ideal(g, m):
    F = np.zeros((m, g.k))
    for z, c in enumerate(g.clusters):
        if c and max(c) >= m:
            raise DomainError(f"cluster {z} references entity {max(c)} but m={m}")
        F[sorted(c), z] = 1.0
    return F


def build_A(g, rs):
    """Cost matrix: A[i, j] = |C_i & supp(r_j)| for every factor and every rule."""
    A = np.zeros((g.k, len(rs)))
    for i, c in enumerate(g.clusters):
        for j, r in enumerate(rs.rules):
            A[i, j] = len(c & r.support)
    return A


def cluster_assignment(f):
    """Entity-to-factor sets induced by ``f`` and the matching binary matrix."""
    f = np.asarray(f, dtype=float)
    rowmax = f.max(axis=1, keepdims=True) if f.shape[1] else np.zeros((f.shape[0], 1))
    Fc = np.zeros_like(f)
    pos = rowmax[:, 0] > 0
    Fc[pos] = (f[pos] / rowmax[pos] >= 0.5).astype(float)
    sets = [frozenset(np.flatnonzero(row).tolist()) for row in Fc]
    return sets, Fc


def induced_clusters(fc):
    """Per-factor entity sets of a binary assignment matrix."""
    fc = np.asarray(fc)
    return [frozenset(np.flatnonzero(fc[:, z]).tolist()) for z in range(fc.shape[1])]
