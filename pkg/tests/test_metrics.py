import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rinmf.errors import DomainError, ShapeError
from rinmf.grouping import cluster_assignment
from rinmf.metrics import (
    avg_corr_difference,
    correspondence,
    description_error,
    evaluate,
    factor_correspondence,
    match_factors,
    representation_error,
)

sets = st.frozensets(st.integers(0, 9))


def test_representation_error_examples(rng):
    F = rng.uniform(size=(5, 2))
    G = rng.uniform(size=(4, 2))
    assert representation_error(F @ G.T, F, G) == pytest.approx(0.0, abs=1e-13)
    x = rng.uniform(size=(5, 4))
    assert representation_error(x, np.full((5, 2), 1e-9), np.full((4, 2), 1e-9)) == pytest.approx(100, rel=1e-6)
    assert representation_error(np.array([[2.0]]), np.array([[1.0]]), np.array([[1.0]])) == 50.0
    with pytest.raises(DomainError):
        representation_error(np.zeros((2, 2)), np.ones((2, 1)), np.ones((2, 1)))


def test_representation_error_scale_covariant(rng):
    x = rng.uniform(size=(6, 5))
    F = rng.uniform(size=(6, 3))
    G = rng.uniform(size=(5, 3))
    D = rng.uniform(0.1, 10, size=3)
    assert representation_error(x, F * D, G / D) == pytest.approx(representation_error(x, F, G), abs=1e-10)


def test_description_error_examples():
    ideal = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert description_error(ideal, ideal) == 0.0
    t, z = 3, 3
    assert description_error(1 - ideal, ideal) == pytest.approx(100 * math.sqrt((t + z) / t), rel=1e-15)
    four = np.array([[1.0, 1.0], [1.0, 1.0]])
    flipped = four.copy()
    flipped[0, 0] = 0
    assert description_error(flipped, four) == 50.0
    with pytest.raises(DomainError):
        description_error(np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ShapeError):
        description_error(np.zeros((2, 2)), np.ones((2, 3)))


def test_description_error_zero_iff_assignment_reproduces_ideal(rng):
    ideal = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    for _ in range(200):
        F = rng.uniform(size=(3, 2))
        _, fc = cluster_assignment(F)
        assert (description_error(fc, ideal) == 0) == np.array_equal(fc, ideal)


def test_correspondence_examples():
    assert correspondence({1, 2}, {1, 2}) == 1.0
    assert correspondence({1}, {2}) == 0.0
    assert correspondence({0, 1}, {1, 2}) == pytest.approx(1 / 3)
    assert correspondence(set(), set()) == 1.0
    assert correspondence(set(), {1}) == 0.0


@given(sets, sets)
def test_correspondence_symmetric_and_one_iff_equal(a, b):
    assert correspondence(a, b) == correspondence(b, a)
    assert (correspondence(a, b) == 1.0) == (a == b)
    assert 0.0 <= correspondence(a, b) <= 1.0


def test_adc_examples():
    assert avg_corr_difference([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert avg_corr_difference([1.0] * 3, [0.0] * 3) == 1.0
    assert avg_corr_difference([0.8, 0.4], [0.2, 0.6]) == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(ShapeError):
        avg_corr_difference([1.0], [1.0, 0.0])


def test_factor_correspondence_pairs_by_index():
    ideal = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    swapped = ideal[:, ::-1]
    assert factor_correspondence(swapped, ideal) == [0.0, 0.0]
    perm = match_factors(swapped, ideal)
    assert factor_correspondence(swapped[:, perm], ideal) == [1.0, 1.0]


def test_evaluate_report(rng):
    ideal = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    G = rng.uniform(size=(4, 2))
    rep = evaluate(ideal @ G.T, ideal, G, ideal, iterations=7)
    assert rep.re == pytest.approx(0.0, abs=1e-12)
    assert rep.de == 0.0 and rep.corr == [1.0, 1.0] and rep.mean_corr == 1.0
    assert rep.iterations == 7 and rep.sparseness_rows == [1.0, 1.0, 1.0]
    rep = evaluate(ideal @ G.T, ideal[:, ::-1], G[:, ::-1], ideal, hungarian=True)
    assert rep.mean_corr == 1.0
