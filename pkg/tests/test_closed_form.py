import math
import warnings
from fractions import Fraction
from math import gcd

import pytest

from kfree.arith import euler_phi
from kfree.closed_form import (
    InconsistencyError,
    RkValue,
    applicable,
    coprime_deficit,
    cross_check,
    density_identity_check,
    mersenne_rk,
    rk_coprime,
    rk_k2m,
    rk_km,
    rk_theorem5,
    sidon_bound,
    theorem5_shapes,
)
from kfree.forest import rk
from kfree.oracle import oracle_rk_exhaustive, oracle_rk_pseudoforest


def test_rkvalue_rejects_unknown_tag():
    with pytest.raises(ValueError):
        RkValue(3, "guess")
    assert int(RkValue(3, "km")) == 3


def test_coprime_examples():
    assert rk_coprime(2, 7).value == 2
    assert rk_coprime(2, 15).value == 7
    for n in (1, 2, 9, 100):
        assert rk_coprime(1, n).value == 0
    with pytest.raises(ValueError):
        rk_coprime(2, 12)


def test_coprime_against_forest_and_oracle():
    for k in (2, 3, 5, 7):
        for n in range(1, 600):
            if gcd(k, n) != 1:
                continue
            v = rk_coprime(k, n).value
            assert v == rk(k, n) == oracle_rk_pseudoforest(k, n), (k, n)


def test_km_examples():
    assert rk_km(2, 3).value == 3 == oracle_rk_exhaustive(2, 6)
    assert rk_km(6, 1).value == 5 == oracle_rk_exhaustive(6, 6)
    assert rk_km(3, 2).value == 4 == oracle_rk_exhaustive(3, 6)
    with pytest.raises(ValueError):
        rk_km(2, 4)


def test_k2m_examples():
    assert rk_k2m(2, 3).value == 7 == oracle_rk_exhaustive(2, 12)
    assert rk_k2m(2, 1).value == 2 == oracle_rk_exhaustive(2, 4)
    assert rk_k2m(15, 3 * 5**2 * 7**2).value == 775180
    assert rk_k2m(1, 5).value == 0


def test_theorem5_examples():
    assert rk_theorem5(2, 8).value == 5 == euler_phi(8) + euler_phi(2)
    assert rk_theorem5(12, 16).value == 12 == euler_phi(16) + euler_phi(8)
    assert rk_theorem5(6, 45).value == 30 == euler_phi(45) + euler_phi(9)
    assert oracle_rk_pseudoforest(6, 45) == 30
    assert rk_theorem5(2, 30) is None
    assert rk_theorem5(8, 16) is None


def test_theorem5_shape_detection():
    assert theorem5_shapes(6, 45) == [(3, 1, 2, 2, 5, 1)]
    assert theorem5_shapes(12, 16) == [(2, 2, 3, 4, None, None)]
    # u = 2 shares a prime with n, and so does u = 9
    assert theorem5_shapes(18, 2**3 * 3**2) == []
    assert theorem5_shapes(2, 30) == []
    # u must avoid the other prime, so at most one shape ever matches
    for k in range(1, 200):
        for n in range(1, 400):
            assert len(theorem5_shapes(k, n)) <= 1


def test_theorem5_literal_sum_defect():
    # the literal sums miss the root share of an unpicked root stratum
    assert rk_theorem5(2, 12, literal=True).value == 6
    assert rk_theorem5(2, 12).value == 7 == oracle_rk_exhaustive(2, 12)
    # and count a whole root stratum for k = u p^2, alpha = 1 mod 4
    assert rk_theorem5(4, 2, literal=True).value == 2
    assert rk_theorem5(4, 2).value == 1 == oracle_rk_exhaustive(4, 2)


def test_theorem5_literal_exact_for_prime_power_and_up():
    for p in (2, 3, 5, 7):
        for u in range(1, 12):
            if u % p == 0:
                continue
            for alpha in range(1, 9):
                n = p**alpha
                if n > 10**6:
                    break
                assert rk_theorem5(u * p, n, literal=True).value == rk(u * p, n)


def test_theorem5_corrected_matches_forest():
    for p in (2, 3, 5):
        for q in (None, 2, 3, 5):
            if q == p:
                continue
            for u in range(1, 11):
                if u % p == 0 or (q and u % q == 0):
                    continue
                for v in (1, 2):
                    k = u * p**v
                    for alpha in range(1, 9):
                        for beta in range(1, 5) if q else [0]:
                            n = p**alpha * (q**beta if q else 1)
                            if n > 10**7:
                                continue
                            assert rk_theorem5(k, n).value == rk(k, n), (k, n)


def test_mersenne_examples():
    assert mersenne_rk(3).value == 2 == oracle_rk_exhaustive(2, 7)
    assert mersenne_rk(5).value == 12 == rk_coprime(2, 31).value
    assert mersenne_rk(13).value == 3780 == 4095 - 315
    assert mersenne_rk(2).value == 1 == oracle_rk_exhaustive(2, 3)
    with pytest.raises(ValueError):
        mersenne_rk(11)


def test_mersenne_agrees_with_forest():
    for m in (3, 5, 7, 13, 17, 19, 31, 61):
        assert mersenne_rk(m).value == rk(2, (1 << m) - 1)


def test_sidon_bound_values():
    b = sidon_bound(3)
    assert b.printed == pytest.approx(math.sqrt(3 - 6 / math.log2(6) + 0.25) + 0.5, rel=1e-12)
    assert b.exact == pytest.approx(math.sqrt(2.25) + 0.5)
    assert b.exact_floor == 2
    b = sidon_bound(13)
    assert b.rk == 3780
    assert b.exact_floor == math.floor(math.sqrt(3780 + 0.25) + 0.5) == 61
    assert 61 * 60 <= 3780 < 62 * 61
    assert b.printed_floor is not None and b.warning is None


def test_sidon_bound_degenerate():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        b = sidon_bound(2)
    assert b.warning and math.isnan(b.printed) and b.printed_floor is None
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)
    assert b.exact_floor == 1


def test_density_identity_examples():
    assert rk(2, 4) == 2 == oracle_rk_exhaustive(2, 4)
    assert rk(3, 9) == 6 == oracle_rk_exhaustive(3, 9)
    assert rk(2, 64) == 42 == oracle_rk_pseudoforest(2, 64)
    for k in (2, 3, 5, 6, 7):
        for m in (1, 2, 3):
            assert density_identity_check(k, m)
    with pytest.raises(OverflowError):
        density_identity_check(10, 10)


def test_coprime_deficit_is_o_of_n():
    # max deficit/n over odd n in each window (N/2, N] shrinks
    peaks = []
    for N in (10**3, 10**4, 10**5):
        peaks.append(max(coprime_deficit(2, x) / x for x in range(N // 2 + 1, N + 1, 2) if x % 2))
    assert peaks[0] > peaks[1] > peaks[2]
    assert peaks[2] < Fraction(1, 20)


def test_cross_check_and_applicable():
    ref, others = cross_check(2, 12)
    assert ref.value == 7 and set(others) == {"k2m", "thm5"}
    assert set(applicable(2, 7)) == {"coprime"}
    assert set(applicable(3, 6)) >= {"km"}
    for n in range(1, 400):
        for k in (2, 3, 4, 6):
            cross_check(k, n)


def test_inconsistency_is_an_error_type():
    assert issubclass(InconsistencyError, RuntimeError)
