import random
from math import gcd, prod

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kfree.arith import (
    MAX_INT,
    Factorization,
    divisor_values,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    multiplicative_order,
)


def phi_bruteforce(n):
    return sum(1 for x in range(1, n + 1) if gcd(x, n) == 1)


def order_bruteforce(k, d):
    if d == 1:
        return 1
    x, l = k % d, 1
    while x != 1:
        x = x * k % d
        l += 1
    return l


def test_factorize_examples():
    assert factorize(826875).as_dict() == {3: 3, 5: 4, 7: 2}
    assert factorize(1).factors == ()
    assert factorize(8191).as_dict() == {8191: 1}
    # 8191 is prime: no divisor up to its square root
    assert all(8191 % p for p in range(2, 91))


def test_factorize_rejects_bad_input():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(OverflowError):
        factorize(MAX_INT + 1)
    with pytest.raises(TypeError):
        factorize(True)


def test_factorization_roundtrip_up_to_a_million():
    for n in range(1, 10**6 + 1):
        assert factorize(n).value == n


def test_factorization_roundtrip_dense_prefix():
    for n in range(1, 20001):
        f = factorize(n)
        assert f.value == n
        assert all(is_prime(p) for p in f.primes)


def test_factorization_roundtrip_random_63bit():
    rng = random.Random(20240601)
    for _ in range(10**4):
        n = rng.randrange(1, MAX_INT + 1)
        f = factorize(n)
        assert f.value == n
        assert list(f.primes) == sorted(set(f.primes))


def test_hard_semiprimes_and_prime_powers():
    p, q = 1000003, 999999937
    assert factorize(p * q).as_dict() == {p: 1, q: 1}
    assert factorize(p**3).as_dict() == {p: 3}
    big = 2**61 - 1
    assert factorize(big).as_dict() == {big: 1}
    assert factorize(2**62).as_dict() == {2: 62}


def test_factorization_validates():
    with pytest.raises(ValueError):
        Factorization(((3, 1), (2, 1)))
    with pytest.raises(ValueError):
        Factorization(((2, 0),))
    assert str(Factorization(((3, 3), (5, 4), (7, 2)))) == "3^3·5^4·7^2"
    assert str(Factorization()) == "1"


def test_euler_phi_examples():
    assert euler_phi(Factorization()) == 1
    assert euler_phi(Factorization(((3, 2),))) == 6 == phi_bruteforce(9)
    assert euler_phi(factorize(826875)) == 378000
    # product formula against a coprime count at a smaller scale with the same primes
    assert euler_phi(factorize(3**2 * 5 * 7)) == phi_bruteforce(3**2 * 5 * 7)


def test_euler_phi_matches_count():
    for n in range(1, 600):
        assert euler_phi(n) == phi_bruteforce(n)


def test_gauss_divisor_sum():
    for n in range(1, 10**5 + 1, 13):
        assert sum(euler_phi(d) for d in divisor_values(n)) == n
    for n in range(1, 3000):
        assert sum(euler_phi(d) for d in divisor_values(n)) == n


def test_divisors_examples():
    assert [d.value for d in divisors(12)] == [1, 2, 3, 4, 6, 12]
    assert [d.value for d in divisors(1)] == [1]
    ds = divisors(826875)
    assert len(ds) == (3 + 1) * (4 + 1) * (2 + 1) == 60
    values = [d.value for d in ds]
    assert values == sorted(values)
    assert values == [d for d in range(1, 826876) if 826875 % d == 0]


def test_multiplicative_order_examples():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(5, 1) == 1
    assert multiplicative_order(2, 8191) == 13
    with pytest.raises(ValueError):
        multiplicative_order(2, 12)


def test_multiplicative_order_matches_iteration():
    for d in range(1, 400):
        for k in range(1, 30):
            if gcd(k, d) == 1:
                assert multiplicative_order(k, d) == order_bruteforce(k, d)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 10**12), st.integers(1, 10**6))
def test_order_properties(d, k):
    if gcd(k, d) != 1:
        return
    l = multiplicative_order(k, d)
    assert euler_phi(d) % l == 0
    assert pow(k, l, d) == 1 % d
    for p in factorize(l).primes:
        assert pow(k, l // p, d) != 1


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 101, 65537]), min_size=0, max_size=10))
def test_factorize_of_products(primes):
    n = prod(primes)
    assume(n <= MAX_INT)
    f = factorize(n)
    assert sorted(p for p, e in f.factors for _ in range(e)) == sorted(primes)
