"""Integer plumbing: factorization, Euler's totient, divisors, multiplicative order.

Everything here is restricted to machine-width integers (at most 2**63 - 1);
larger inputs raise :class:`OverflowError` instead of silently growing.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, isqrt

import numpy as np

MAX_INT = (1 << 63) - 1
TRIAL_LIMIT = 3000

# deterministic Miller-Rabin witnesses for all n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def check_int(name, value, lo=1, hi=MAX_INT):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if value > hi:
        raise OverflowError(f"{name}={value} exceeds {hi}")
    if value < lo:
        raise ValueError(f"{name} must be >= {lo}, got {value}")
    return value


@dataclass(frozen=True)
class Factorization:
    """Canonical prime factorization: ``((p1, e1), (p2, e2), ...)`` with p1 < p2 < ...

    The empty tuple stands for 1.
    """

    factors: tuple = ()

    def __post_init__(self):
        factors = tuple((int(p), int(e)) for p, e in self.factors)
        object.__setattr__(self, "factors", factors)
        last = 1
        for p, e in factors:
            if p <= last or e < 1:
                raise ValueError(f"not a canonical factorization: {factors}")
            last = p
        if self.value > MAX_INT:
            raise OverflowError(f"factorization value exceeds {MAX_INT}")

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((p, e) for p, e in d.items() if e)))

    @property
    def value(self):
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    @property
    def exponents(self):
        return tuple(e for _, e in self.factors)

    def as_dict(self):
        return dict(self.factors)

    def __int__(self):
        return self.value

    def __str__(self):
        if not self.factors:
            return "1"
        return "·".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors)


@lru_cache(maxsize=1)
def _small_primes():
    sieve = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def is_prime(n):
    """Deterministic Miller-Rabin for machine-width n."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n):
    # Pollard-Brent with fixed seeds so the output never depends on a global RNG
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            j = 0
            while j < r and g == 1:
                ys = y
                for _ in range(min(m, r - j)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                j += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


def _split(n, out):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _brent(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=1 << 16)
def _factorize(n):
    out = {}
    rest = n
    for p in _small_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            out[p] = e
    # rest has no prime factor up to TRIAL_LIMIT
    if rest > 1:
        if rest <= TRIAL_LIMIT * TRIAL_LIMIT:
            out[rest] = out.get(rest, 0) + 1
        else:
            _split(rest, out)
    return Factorization.from_dict(out)


def factorize(n):
    """Prime factorization of ``1 <= n <= 2**63 - 1``.

    Trial division by small primes, then Miller-Rabin and Pollard-Brent with
    fixed parameters, so the result is reproducible.

    >>> str(factorize(826875))
    '3^3·5^4·7^2'
    """
    return _factorize(check_int("n", n))


def as_factorization(x):
    return x if isinstance(x, Factorization) else factorize(x)


def euler_phi(f):
    """Euler's totient from a factorization (an int is factorized first)."""
    f = as_factorization(f)
    out = 1
    for p, e in f.factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def divisor_values(f):
    """All divisors of ``f`` as ints, ascending."""
    f = as_factorization(f)
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisors(f):
    """All divisors as :class:`Factorization` objects, ascending by value."""
    f = as_factorization(f)
    primes = f.primes
    out = []
    for exps in product(*(range(e + 1) for e in f.exponents)):
        out.append(Factorization(tuple((p, e) for p, e in zip(primes, exps) if e)))
    out.sort(key=lambda d: d.value)
    return out


def _phi_factorization(f):
    acc = {}
    for p, e in f.factors:
        if e > 1:
            acc[p] = acc.get(p, 0) + e - 1
        for q, a in factorize(p - 1).factors if p > 2 else ():
            acc[q] = acc.get(q, 0) + a
    return Factorization.from_dict(acc)


def multiplicative_order(k, d, d_fact=None):
    """Order of ``k`` in (Z/dZ)^*; the trivial group d = 1 gives 1.

    Starts from phi(d) and strips prime factors while k^(order/q) stays 1.
    """
    d = check_int("d", d)
    if d == 1:
        return 1
    k = int(k) % d
    if gcd(k, d) != 1:
        raise ValueError(f"gcd({k}, {d}) != 1: k is not a unit mod d")
    f = d_fact if d_fact is not None else factorize(d)
    order = euler_phi(f)
    for q, _ in _phi_factorization(f).factors:
        while order % q == 0 and pow(k, order // q, d) == 1:
            order //= q
    return order
