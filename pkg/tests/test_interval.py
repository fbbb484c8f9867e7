from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kfree.interval import (
    asymptotic_report,
    construct_min_maximal,
    h_value,
    interval_orbits,
    is_maximal_kfree_interval,
    main_term,
    min_pattern,
    orbit_length,
    satisfies_p,
    tilde_rk,
    tilde_rk_by_levels,
)
from kfree.oracle import oracle_tilde_exhaustive


def p_minimum(l):
    """Smallest |E| over all E in [1, l] with property (P), by enumeration."""
    for size in range(1, l + 1):
        if any(satisfies_p(E, l) for E in combinations(range(1, l + 1), size)):
            return size
    raise AssertionError("no (P) set")


def test_h_examples():
    assert h_value(3) == 1
    assert h_value(1) == 1
    assert h_value(7) == 3
    assert p_minimum(7) == 3


def test_min_pattern_examples():
    assert min_pattern(6) == [2, 5]
    assert min_pattern(1) == [1]
    assert min_pattern(2) == [2]
    assert min_pattern(4) == [1, 4]
    assert min_pattern(3) == [2]


def test_p_property_details():
    assert satisfies_p([2], 3)
    assert not satisfies_p([1, 2], 3)  # consecutive
    assert not satisfies_p([1], 3)  # misses {2, 3}
    assert not satisfies_p([2, 6], 7)  # window {3, 4, 5} empty
    assert not satisfies_p([0], 1)


@pytest.mark.parametrize("l", range(1, 16))
def test_h_is_exhaustive_minimum(l):
    assert p_minimum(l) == h_value(l)


def test_min_pattern_satisfies_p():
    for l in range(1, 201):
        pat = min_pattern(l)
        assert len(pat) == h_value(l)
        assert satisfies_p(pat, l), l


def test_tilde_examples():
    assert tilde_rk(2, 10) == 6 == oracle_tilde_exhaustive(2, 10)
    assert tilde_rk(2, 4) == 2 == oracle_tilde_exhaustive(2, 4)
    assert tilde_rk(3, 9) == 6 == oracle_tilde_exhaustive(3, 9)
    assert tilde_rk(2, 1) == 1 == oracle_tilde_exhaustive(2, 1)
    for k in (2, 3, 7, 100):
        for n in range(0, k):
            assert tilde_rk(k, n) == n
    with pytest.raises(ValueError):
        tilde_rk(1, 10)


@pytest.mark.parametrize("k", [2, 3])
def test_tilde_matches_exhaustive(k):
    for n in range(1, 19):
        assert tilde_rk(k, n) == oracle_tilde_exhaustive(k, n), (k, n)


def test_exhaustive_oracle_rejects_large_n():
    with pytest.raises(OverflowError):
        oracle_tilde_exhaustive(2, 19)


def test_orbits_partition_interval():
    for k in (2, 3, 5):
        for n in list(range(0, 300)) + [10**4, 54321, 10**5]:
            orbits = interval_orbits(k, n)
            assert sum(o.length for o in orbits) == n
            if n <= 300:
                covered = sorted(x for o in orbits for x in o.elements(k))
                assert covered == list(range(1, n + 1))


def test_orbit_length_definition():
    assert orbit_length(1, 2, 10) == 4
    assert orbit_length(3, 2, 10) == 2
    assert orbit_length(7, 2, 10) == 1
    assert orbit_length(1, 3, 9) == 3
    big = 2**62
    assert orbit_length(1, 2, big) == 63


def test_tilde_level_count_agrees():
    for k in (2, 3, 5, 10):
        for n in list(range(0, 2000)) + [10**6, 10**7 + 3]:
            assert tilde_rk(k, n) == tilde_rk_by_levels(k, n), (k, n)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 50), st.integers(0, 10**6))
def test_tilde_level_count_property(k, n):
    assert tilde_rk(k, n) == tilde_rk_by_levels(k, n)


def test_construct_examples():
    sol = construct_min_maximal(2, 10)
    assert set(sol.elements) == {1, 8, 6, 10, 7, 9}
    assert construct_min_maximal(3, 2).elements == [1, 2]
    assert construct_min_maximal(2, 4).elements == [2, 3]
    assert sol.pattern(1) == [1, 4] and sol.pattern(3) == [2]
    with pytest.raises(KeyError):
        sol.pattern(2)


@pytest.mark.parametrize("k", [2, 3, 5, 10])
def test_construct_is_minimal_maximal(k):
    for n in range(1, 10**4 + 1):
        sol = construct_min_maximal(k, n)
        assert len(sol) == tilde_rk(k, n)
        assert is_maximal_kfree_interval(sol.elements, k, n), (k, n)


def maximal_bruteforce(A, k, n):
    S = set(A)
    if any(k * a in S for a in S):
        return False
    return all(z in S or k * z in S or (z % k == 0 and z // k in S) for z in range(1, n + 1))


@settings(max_examples=400, deadline=None)
@given(st.integers(2, 6), st.integers(0, 40), st.data())
def test_maximality_matches_bruteforce(k, n, data):
    A = data.draw(st.sets(st.integers(1, max(n, 1)), max_size=n)) if n else set()
    assert is_maximal_kfree_interval(A, k, n) == maximal_bruteforce(A, k, n)


def test_maximality_examples():
    assert is_maximal_kfree_interval({2, 3}, 2, 4)
    assert not is_maximal_kfree_interval(set(), 2, 1)
    assert not is_maximal_kfree_interval({1, 2}, 2, 2)
    assert not is_maximal_kfree_interval({3}, 2, 4)
    with pytest.raises(ValueError):
        is_maximal_kfree_interval({5}, 2, 4)


def test_asymptotic_examples():
    assert main_term(2, 7) == 4
    rows = asymptotic_report(2, [0, 1, 10])
    assert [r.n for r in rows] == [10]
    assert rows[0].error == Fraction(2, 7)
    rows = asymptotic_report(3, [10**3, 10**4])
    assert all(r.main_term == Fraction(9 * r.n, 13) for r in rows)


def test_ratio_tends_to_four_sevenths():
    n = 10**6
    assert abs(Fraction(tilde_rk(2, n), n) - Fraction(4, 7)) < Fraction(4, 7) / 100
