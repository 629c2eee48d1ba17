import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rinmf.errors import DomainError
from rinmf.solvers import hoyer_project, hoyer_sparseness, project_to_sparseness, sparse_nmf_step
from rinmf.solvers.sparse import hoyer_project_rows


def test_sparseness_examples():
    assert hoyer_sparseness([0, 0, 3.0, 0]) == 1.0
    assert hoyer_sparseness([2.0] * 5) == pytest.approx(0.0, abs=1e-15)
    assert hoyer_sparseness([1, 1, 0, 0]) == pytest.approx(2 - math.sqrt(2), abs=1e-12)
    with pytest.raises(DomainError):
        hoyer_sparseness([0.0, 0.0])
    with pytest.raises(DomainError):
        hoyer_sparseness([1.0])


@given(arrays(np.float64, 6, elements=st.floats(0, 10)).filter(lambda v: v.any()), st.floats(1e-3, 1e3))
def test_sparseness_scale_invariant(v, s):
    assert hoyer_sparseness(v * s) == pytest.approx(hoyer_sparseness(v), abs=1e-9)


def test_projection_identity_at_target():
    v = np.array([0.5, 1.0, 0.0, 2.0])
    out = project_to_sparseness(v, hoyer_sparseness(v))
    np.testing.assert_allclose(out, v, atol=1e-12)


def test_projection_extremes():
    v = np.array([0.3, 1.2, 0.7, 0.1])
    norm = np.linalg.norm(v)
    spike = project_to_sparseness(v, 1.0)
    assert np.count_nonzero(spike > 1e-12) == 1
    assert np.linalg.norm(spike) == pytest.approx(norm, rel=1e-12)
    flat = project_to_sparseness(v, 0.0)
    np.testing.assert_allclose(flat, np.full(4, norm / 2), rtol=1e-6)


@pytest.mark.parametrize("target", [round(0.1 * i, 1) for i in range(1, 10)])
def test_projection_hits_target(target, rng):
    for _ in range(50):
        v = rng.uniform(0, 1, size=int(rng.integers(2, 30)))
        out = project_to_sparseness(v, target)
        assert np.all(out >= 0)
        assert abs(hoyer_sparseness(out) - target) < 1e-6
        assert abs(np.linalg.norm(out) - np.linalg.norm(v)) < 1e-9


def test_projection_is_closest_point(rng):
    # compare against random feasible points: none may be closer
    v = rng.uniform(0, 1, size=5)
    l2 = np.linalg.norm(v)
    l1 = l2 * (math.sqrt(5) - 0.6 * (math.sqrt(5) - 1))
    s = hoyer_project(v, l1, l2)
    best = np.linalg.norm(s - v)
    for _ in range(2000):
        w = project_to_sparseness(rng.uniform(0, 1, size=5) * l2, 0.6)
        w = w * l2 / np.linalg.norm(w)
        assert np.linalg.norm(w - v) >= best - 1e-9


def test_batched_projection_matches_scalar(rng):
    X = rng.normal(size=(200, 7))
    l2 = np.linalg.norm(X, axis=1)
    for t in (0.1, 0.4, 0.8, 1.0):
        l1 = l2 * (math.sqrt(7) - t * (math.sqrt(7) - 1))
        batched = hoyer_project_rows(X, l1, l2)
        scalar = np.array([hoyer_project(x, a, b) for x, a, b in zip(X, l1, l2)])
        np.testing.assert_allclose(batched, scalar, atol=1e-10)


def test_sparse_step_keeps_target_and_decreases_error(rng):
    x = rng.uniform(size=(20, 10))
    F = np.array([project_to_sparseness(r, 0.6) for r in rng.uniform(size=(20, 3))])
    G = rng.uniform(size=(10, 3))
    step = 1.0
    prev = np.inf
    for _ in range(30):
        F, G, step = sparse_nmf_step(x, F, G, 0.6, step)
        err = np.sum((x - F @ G.T) ** 2)
        assert err <= prev * (1 + 1e-12)
        prev = err
    for row in F:
        assert hoyer_sparseness(row) == pytest.approx(0.6, abs=1e-6)
