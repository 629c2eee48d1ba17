"""Dense matrix helpers.

Matrices are plain C-ordered ``float64`` numpy arrays. The helpers here add
the shape and finiteness checks the solvers rely on.
"""
import numpy as np

from .errors import DomainError, ShapeError


def as_matrix(data, name="matrix"):
    """Return ``data`` as a finite, 2-D, C-contiguous float64 array."""
    a = np.ascontiguousarray(data, dtype=np.float64)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} contains non-finite values")
    return a


def matmul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply shapes {a.shape} and {b.shape}")
    out = a @ b
    if not np.all(np.isfinite(out)):
        raise DomainError("matrix product overflowed")
    return out


def frobenius_norm(a):
    a = np.asarray(a, dtype=np.float64)
    # sqrt(sum of squares) with a fixed reduction order
    return float(np.sqrt(np.sum(a * a)))


def scale_column_pair(f, g, j, s):
    """Divide column ``j`` of ``f`` by ``s`` and multiply column ``j`` of ``g`` by ``s``.

    The product ``f @ g.T`` is preserved up to rounding. Returns new arrays.
    """
    if not s > 0:
        raise DomainError(f"scale must be positive, got {s}")
    f = np.array(f, dtype=np.float64)
    g = np.array(g, dtype=np.float64)
    if f.shape[1] != g.shape[1]:
        raise ShapeError(f"factor shapes {f.shape} and {g.shape} disagree on k")
    if not 0 <= j < f.shape[1]:
        raise IndexError(f"column {j} out of range for k={f.shape[1]}")
    if s != 1:
        f[:, j] /= s
        g[:, j] *= s
    return f, g


def normalize_columns_by_max(f, g, eps):
    """Scale every column of ``f`` to max 1, pushing the scale into ``g``."""
    scale = np.maximum(f.max(axis=0), eps)
    return f / scale, g * scale
