import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tree_uncover import exact
from tree_uncover.exact import (
    NonIntegralCountError,
    abel_identity_check,
    admissible_values,
    binom,
    count_rooted_trees_root_cluster,
    count_trees_full_sequence,
    count_trees_partial_sequence,
    count_trees_with_clusters,
    expected_components,
    expected_edges,
    full_sequences,
    root_cluster_expectation,
    root_cluster_expectation_integral,
    root_cluster_pmf,
    uncover_gf_coefficients,
    uncovered_vertex_cluster_pmf,
    variance_edges,
)


def test_binomial_convention():
    assert binom(-1, 0) == 1
    assert binom(3, -1) == 0
    assert binom(2, 3) == 0
    assert binom(5, 2) == 10


def test_edge_moments():
    assert expected_edges(4, 3) == Fraction(3, 2)
    assert expected_edges(9, 1) == 0
    assert expected_edges(9, 9) == 8
    assert variance_edges(9, 1) == 0
    assert variance_edges(9, 9) == 0
    assert variance_edges(4, 2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        expected_edges(4, 5)
    with pytest.raises(ValueError):
        variance_edges(4, 0)


def test_partial_sequence_examples():
    assert count_trees_partial_sequence(3, [2], [1]) == 2
    assert count_trees_partial_sequence(3, [2], [0]) == 1
    for n in range(3, 9):
        assert sum(count_trees_partial_sequence(n, [2], [a]) for a in (0, 1)) == n ** (n - 2)


@pytest.mark.parametrize("js,as_", [([3, 2], [0, 1]), ([2, 3], [1, 0]), ([2], [2]), ([1], [0]), ([4], [1])])
def test_partial_sequence_rejects_bad_constraints(js, as_):
    with pytest.raises(ValueError):
        count_trees_partial_sequence(4, js, as_)


@pytest.mark.parametrize("n", range(3, 8))
def test_partial_sequence_normalises_for_every_position_set(n):
    for r in (1, 2, 3):
        for js in itertools.combinations(range(2, n), r):
            total = sum(count_trees_partial_sequence(n, js, a) for a in admissible_values(n, js))
            assert total == n ** (n - 2)


def test_generating_function_expansion_matches_product_formula():
    assert uncover_gf_coefficients(4, [2, 3]) == {(0, 0): 1, (0, 1): 4, (0, 2): 3, (1, 1): 2, (1, 2): 6}
    for n in (5, 6, 7):
        for js in itertools.combinations(range(2, n), 2):
            coeffs = uncover_gf_coefficients(n, js)
            for a in admissible_values(n, js):
                assert coeffs.get(a, 0) == count_trees_partial_sequence(n, js, a)


def test_full_sequence_examples():
    for n in range(2, 9):
        assert count_trees_full_sequence([0] * (n - 1) + [n - 1]) == 1
        assert count_trees_full_sequence(list(range(n))) == math.factorial(n - 1)
        assert sum(count_trees_full_sequence(a) for a in full_sequences(n)) == n ** (n - 2)
    assert count_trees_full_sequence([0, 0, 2]) == 1
    assert count_trees_full_sequence([0, 1, 2]) == 2
    with pytest.raises(ValueError):
        count_trees_full_sequence([0, 2, 2])
    with pytest.raises(ValueError):
        count_trees_full_sequence([0, 1, 1])


def test_cluster_count_examples():
    assert count_trees_with_clusters(3, 2, [2]) == 2
    assert count_trees_with_clusters(3, 2, [1]) == 1
    assert count_trees_with_clusters(4, 2, [2]) == 8
    assert count_trees_with_clusters(5, 5, [5]) == 125
    assert count_trees_with_clusters(5, 5, [2]) == 0
    with pytest.raises(ValueError):
        count_trees_with_clusters(5, 3, [2, 2])


def test_root_cluster_examples():
    assert root_cluster_pmf(2, 1, 0) == Fraction(1, 2)
    assert root_cluster_pmf(2, 1, 1) == Fraction(1, 2)
    assert root_cluster_pmf(6, 6, 6) == 1
    assert root_cluster_pmf(3, 2, 2) == Fraction(4, 9)
    assert count_rooted_trees_root_cluster(2, 1, 0) == 2
    assert count_rooted_trees_root_cluster(2, 1, 1) == 2
    assert root_cluster_expectation(2, 1) == Fraction(1, 2)
    assert root_cluster_expectation(3, 2) == Fraction(10, 9)
    assert uncovered_vertex_cluster_pmf(2, 1, 1) == 1
    assert uncovered_vertex_cluster_pmf(3, 2, 2) == Fraction(2, 3)
    with pytest.raises(ValueError):
        root_cluster_pmf(4, 2, 3)
    with pytest.raises(ValueError):
        uncovered_vertex_cluster_pmf(4, 2, 0)


def test_root_cluster_law_normalisation_and_mean():
    for n in range(1, 41):
        for k in range(n + 1):
            pmf = [root_cluster_pmf(n, k, m) for m in range(k + 1)]
            assert sum(pmf) == 1
            assert sum(m * p for m, p in enumerate(pmf)) == root_cluster_expectation(n, k)
    for n in range(1, 9):
        assert root_cluster_expectation(n, n) == n


def test_rooted_count_normalisation():
    for n in range(1, 8):
        for k in range(n + 1):
            counts = [count_rooted_trees_root_cluster(n, k, m) for m in range(k + 1)]
            assert sum(counts) == n ** (n - 1) * binom(n, k)
            for m, c in enumerate(counts):
                assert Fraction(c, n ** (n - 1) * binom(n, k)) == root_cluster_pmf(n, k, m)


def test_vertex_cluster_law_normalises():
    for n in range(1, 8):
        for k in range(1, n + 1):
            assert sum(uncovered_vertex_cluster_pmf(n, k, m) for m in range(1, k + 1)) == 1


def test_root_cluster_from_fixed_sets():
    # pick the root's set, multiply by its r choices of root, normalise by rooted trees
    for n in range(2, 12):
        for k in range(1, n):
            for r in range(1, k + 1):
                lhs = Fraction(count_trees_with_clusters(n, k, [r]) * r * binom(k, r), n ** (n - 1))
                assert lhs == root_cluster_pmf(n, k, r)


def test_component_identity_with_root_cluster_mean():
    for n in range(1, 21):
        for k in range(1, n + 1):
            lhs = sum(r * expected_components(n, k, r) * Fraction(r, n) for r in range(1, k + 1))
            assert lhs == root_cluster_expectation(n, k)


def test_expected_component_examples():
    assert expected_components(3, 2, 2) == Fraction(2, 3)
    assert expected_components(7, 7, 7) == 1
    assert expected_components(7, 7, 3) == 0
    assert expected_components(4, 2, 1) == 1
    with pytest.raises(ValueError):
        expected_components(4, 2, 0)


def test_sizes_times_counts_sum_to_k():
    for n in range(1, 15):
        for k in range(n + 1):
            assert sum(r * expected_components(n, k, r) for r in range(1, k + 1)) == k


def test_abel_identity():
    assert abel_identity_check(3, 2)
    assert abel_identity_check(2, 1)
    with pytest.raises(ValueError):
        abel_identity_check(4, 4)


@pytest.mark.parametrize("n,k,expected", [
    (2, 1, 0.5), (10, 0, 0.0), (3, 2, 10 / 9),
])
def test_integral_examples(n, k, expected):
    assert root_cluster_expectation_integral(n, k) == pytest.approx(expected, rel=1e-8, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_integral_matches_exact_sum(case):
    n, k = case
    exact_value = float(root_cluster_expectation(n, k))
    assert root_cluster_expectation_integral(n, k) == pytest.approx(exact_value, rel=1e-8, abs=1e-12)


def test_counts_are_integers():
    with pytest.raises(NonIntegralCountError):
        exact.as_count(Fraction(1, 2))
    for n in range(2, 10):
        for k in range(1, n):
            for r1 in range(1, k + 1):
                for r2 in range(1, k - r1 + 1):
                    assert isinstance(count_trees_with_clusters(n, k, [r1, r2]), int)


def test_exact_string():
    assert exact.exact_str(Fraction(4, 9)) == "4/9"
    assert exact.exact_str(Fraction(6, 3)) == "2"
