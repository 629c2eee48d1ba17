"""Sparseness-constrained NMF baseline with Hoyer's projection on the rows of F."""
import math

import numpy as np

from ..errors import DomainError


def hoyer_sparseness(v):
    """(sqrt(n) - ||v||_1 / ||v||_2) / (sqrt(n) - 1): 0 for flat vectors, 1 for a single spike."""
    v = np.asarray(v, dtype=float).ravel()
    n = v.size
    if n < 2:
        raise DomainError("sparseness needs at least two entries")
    l2 = math.sqrt(float(v @ v))
    if l2 == 0:
        raise DomainError("sparseness of the zero vector is undefined")
    sq = math.sqrt(n)
    return (sq - float(np.abs(v).sum()) / l2) / (sq - 1)


def hoyer_project(x, l1, l2):
    """Closest non-negative vector to ``x`` with the given L1 and L2 norms.

    Alternates between projecting onto the sum constraint, moving along the
    ray from the simplex midpoint to meet the L2 sphere, and zeroing negative
    coordinates.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    k2 = l2 * l2
    v = x + (l1 - x.sum()) / n
    zero = np.zeros(n, dtype=bool)
    for _ in range(n + 1):
        mid = np.where(zero, 0.0, l1 / (n - zero.sum()))
        w = v - mid
        a = float(w @ w)
        if a > 1e-30:
            b = 2.0 * float(w @ v)
            c = float(v @ v) - k2
            disc = max(b * b - 4 * a * c, 0.0)
            alpha = (-b + math.sqrt(disc)) / (2 * a)
            v = v + alpha * w
        else:
            v = mid.copy()
        if np.all(v >= 0):
            break
        zero |= v <= 0
        v[zero] = 0.0
        v = v + (l1 - v.sum()) / (n - zero.sum())
        v[zero] = 0.0
    return np.maximum(v, 0.0)


def project_to_sparseness(v, target):
    """Project ``v`` to the requested sparseness, keeping its L2 norm."""
    v = np.asarray(v, dtype=float).ravel()
    n = v.size
    if n < 2:
        raise DomainError("sparseness projection needs at least two entries")
    if not 0 <= target <= 1:
        raise DomainError("target sparseness must lie in [0, 1]")
    l2 = math.sqrt(float(v @ v))
    if l2 == 0:
        raise DomainError("cannot project the zero vector")
    sq = math.sqrt(n)
    l1 = l2 * (sq - target * (sq - 1))
    return hoyer_project(v, l1, l2)


def hoyer_project_rows(X, l1, l2):
    """Row-wise :func:`hoyer_project` for a matrix; ``l1`` and ``l2`` are per-row arrays."""
    X = np.asarray(X, dtype=float)
    rows, n = X.shape
    l1 = np.broadcast_to(np.asarray(l1, dtype=float), (rows,))[:, None]
    k2 = np.broadcast_to(np.asarray(l2, dtype=float) ** 2, (rows,))
    V = X + (l1 - X.sum(axis=1, keepdims=True)) / n
    zero = np.zeros_like(V, dtype=bool)
    done = np.zeros(rows, dtype=bool)
    for _ in range(n + 1):
        cnt = n - zero.sum(axis=1, keepdims=True)
        mid = np.where(zero, 0.0, l1 / cnt)
        W = V - mid
        a = (W * W).sum(axis=1)
        b = 2.0 * (W * V).sum(axis=1)
        c = (V * V).sum(axis=1) - k2
        ok = a > 1e-30
        safe_a = np.where(ok, a, 1.0)
        alpha = (-b + np.sqrt(np.maximum(b * b - 4 * a * c, 0.0))) / (2 * safe_a)
        moved = np.where(ok[:, None], V + alpha[:, None] * W, mid)
        V = np.where(done[:, None], V, moved)
        done |= np.all(V >= 0, axis=1)
        if done.all():
            break
        todo = ~done[:, None]
        zero |= todo & (V <= 0)
        V = np.where(zero, 0.0, V)
        cnt = n - zero.sum(axis=1, keepdims=True)
        V = np.where(todo & ~zero, V + (l1 - V.sum(axis=1, keepdims=True)) / cnt, V)
    return np.maximum(V, 0.0)


def _project_rows(F, target, fallback_norms):
    F = np.array(F, dtype=float)
    n = F.shape[1]
    pos = np.maximum(F, 0.0)
    pos_norm = np.sqrt((pos * pos).sum(axis=1))
    dead = pos_norm == 0
    if dead.any():
        # infeasible rows: reseed uniformly at the previous row norm
        F[dead] = (np.maximum(fallback_norms[dead], 1e-12) / math.sqrt(n))[:, None]
        pos_norm[dead] = np.maximum(fallback_norms[dead], 1e-12)
    row_norm = np.sqrt((F * F).sum(axis=1))
    F *= (pos_norm / row_norm)[:, None]
    sq = math.sqrt(n)
    return hoyer_project_rows(F, pos_norm * (sq - target * (sq - 1)), pos_norm)


def sparse_nmf_step(x, F, G, target, step, eps=1e-9):
    """One alternating step: multiplicative update of G, projected gradient on F.

    The F step backtracks (halving ``step``) until the reconstruction error
    does not increase, then grows the step by 1.2 for the next call.
    Returns ``(F, G, step)``.
    """
    G = np.maximum(eps, G * (x.T @ F) / (G @ (F.T @ F) + eps))
    r = x - F @ G.T
    J = float(np.sum(r * r))
    grad = F @ (G.T @ G) - x @ G
    norms = np.sqrt((F * F).sum(axis=1))
    while True:
        cand = _project_rows(F - step * grad, target, norms)
        r = x - cand @ G.T
        if float(np.sum(r * r)) <= J:
            return cand, G, step * 1.2
        step /= 2
        if step < 1e-200:
            return F, G, step
