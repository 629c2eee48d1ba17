"""Evaluation measures: representation/description error, correspondence, ADC, sparseness."""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .densemat import frobenius_norm
from .errors import DomainError, ShapeError
from .grouping import cluster_assignment, induced_clusters
from .solvers.sparse import hoyer_sparseness

__all__ = [
    "EvalReport",
    "avg_corr_difference",
    "correspondence",
    "description_error",
    "evaluate",
    "factor_correspondence",
    "hoyer_sparseness",
    "match_factors",
    "representation_error",
    "row_sparseness",
]


@dataclass
class EvalReport:
    re: float
    de: float
    corr: list
    mean_corr: float
    iterations: int = 0
    sparseness_rows: list = field(default_factory=list)


def representation_error(x, F, G):
    """100 * ||X - F G^T||_F / ||X||_F."""
    xn = frobenius_norm(x)
    if xn == 0:
        raise DomainError("representation error is undefined for X = 0")
    return 100.0 * frobenius_norm(np.asarray(x) - F @ G.T) / xn


def description_error(fc, ideal):
    """100 * ||F_c - ideal||_F / ||ideal||_F."""
    fc = np.asarray(fc, dtype=float)
    ideal = np.asarray(ideal, dtype=float)
    if fc.shape != ideal.shape:
        raise ShapeError(f"F_c {fc.shape} and ideal {ideal.shape} differ")
    dn = frobenius_norm(ideal)
    if dn == 0:
        raise DomainError("description error is undefined for an all-zero ideal matrix")
    return 100.0 * frobenius_norm(fc - ideal) / dn


def correspondence(learned, ideal):
    """Jaccard index of two entity sets; two empty sets count as identical."""
    a, b = set(learned), set(ideal)
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def factor_correspondence(fc, ideal):
    """Per-factor correspondence, factor ``i`` of ``fc`` paired with column ``i`` of ``ideal``."""
    learned = induced_clusters(fc)
    target = induced_clusters(ideal)
    return [correspondence(a, b) for a, b in zip(learned, target)]


def match_factors(fc, ideal):
    """Column permutation of ``fc`` maximizing total correspondence with ``ideal``.

    Only for comparisons across different initializations; runs sharing an
    initialization are paired by index.
    """
    learned = induced_clusters(fc)
    target = induced_clusters(ideal)
    score = np.array([[correspondence(a, b) for b in target] for a in learned])
    rows, cols = linear_sum_assignment(-score)
    perm = np.empty(len(target), dtype=int)
    perm[cols] = rows
    return perm


def avg_corr_difference(corr_a, corr_b):
    if len(corr_a) != len(corr_b):
        raise ShapeError(f"correspondence lists differ in length: {len(corr_a)} vs {len(corr_b)}")
    if not corr_a:
        raise DomainError("need at least one factor")
    return sum(a - b for a, b in zip(corr_a, corr_b)) / len(corr_a)


def row_sparseness(F):
    """Hoyer sparseness of every non-zero row of F."""
    F = np.asarray(F, dtype=float)
    return [hoyer_sparseness(row) for row in F if row.any()]


def evaluate(x, F, G, ideal, iterations=0, hungarian=False):
    _, fc = cluster_assignment(F)
    if hungarian:
        fc = fc[:, match_factors(fc, ideal)]
    corr = factor_correspondence(fc, ideal)
    sp = row_sparseness(F) if F.shape[1] >= 2 else []
    return EvalReport(
        re=representation_error(x, F, G),
        de=description_error(fc, ideal),
        corr=corr,
        mean_corr=float(np.mean(corr)),
        iterations=iterations,
        sparseness_rows=sp,
    )
