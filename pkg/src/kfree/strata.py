"""Strata A_m = {x in Z/nZ : gcd(x, n) = m} and the dynamics of x -> kx on them.

Multiplication by k maps a whole stratum onto a single stratum; on strata
with gcd(k, n/m) = 1 it permutes the elements in cycles of length
l_k(n/m).
"""

from dataclasses import dataclass
from math import gcd

import numpy as np

from .arith import (
    Factorization,
    check_int,
    euler_phi,
    factorize,
    multiplicative_order,
)

# largest n for which residue arrays and k*x products stay in int64
ARRAY_LIMIT = 3 * 10**9


@dataclass(frozen=True)
class ModulusContext:
    """The pair (n, k) with the factorization data the forest needs.

    ``k`` is stored reduced mod n; when k is a multiple of n it is stored as
    ``n`` itself so that the shared exponents saturate.  ``shared`` lists
    ``(p, n_i, k_i)`` for each prime of n dividing k and ``u`` is the part of
    k coprime to n.
    """

    n: int
    k: int
    k_input: int
    n_fact: Factorization
    shared: tuple
    u: int

    @classmethod
    def build(cls, k, n):
        n = check_int("n", n)
        k_input = check_int("k", k)
        k = k_input % n or n
        n_fact = factorize(n)
        shared = []
        u = k
        for p, e in n_fact.factors:
            ki = 0
            while u % p == 0:
                u //= p
                ki += 1
            if ki:
                shared.append((p, e, ki))
        return cls(n, k, k_input, n_fact, tuple(shared), u)

    @property
    def r(self):
        return len(self.shared)

    @property
    def s(self):
        return len(self.n_fact.factors)

    @property
    def annihilating(self):
        """True when k = 0 in Z/nZ (every element is sent to 0)."""
        return self.k == self.n

    def exponents(self, m):
        """Exponent vector of divisor ``m`` over the primes of n."""
        out = []
        for p, e in self.n_fact.factors:
            a = 0
            while a < e and m % p == 0:
                m //= p
                a += 1
            out.append(a)
        return tuple(out)

    def check_divisor(self, m):
        m = check_int("m", m)
        if self.n % m:
            raise ValueError(f"{m} does not divide n={self.n}")
        return m


def make_context(k, n):
    return ModulusContext.build(k, n)


@dataclass(frozen=True)
class Stratum:
    m: int
    exponents: tuple
    size: int
    is_root: bool


def cofactor(m, ctx):
    """Factorization of n/m, read off the exponents of m."""
    exps = ctx.exponents(m)
    return Factorization(
        tuple((p, e - a) for (p, e), a in zip(ctx.n_fact.factors, exps) if e > a)
    )


def is_root_divisor(m, ctx):
    return gcd(ctx.k, ctx.n // m) == 1


def stratum(m, ctx):
    m = ctx.check_divisor(m)
    return Stratum(m, ctx.exponents(m), euler_phi(cofactor(m, ctx)), is_root_divisor(m, ctx))


def stratum_image(m, j, ctx):
    """Divisor m' with k^j . A_m = A_m', i.e. m * prod p_i^min(j k_i, n_i - m_i)."""
    m = ctx.check_divisor(m)
    j = check_int("j", j)
    out = m
    for p, ni, ki in ctx.shared:
        mi = 0
        t = m
        while mi < ni and t % p == 0:
            t //= p
            mi += 1
        out *= p ** min(j * ki, ni - mi)
    return out


def stratum_elements(m, ctx):
    """Sorted int64 array {m v : 1 <= v <= n/m, gcd(v, n/m) = 1} (A_n is {0})."""
    m = ctx.check_divisor(m)
    if m == ctx.n:
        return np.zeros(1, dtype=np.int64)
    q = ctx.n // m
    if ctx.n > ARRAY_LIMIT:
        raise OverflowError(f"n={ctx.n} too large to materialise residues")
    # strike out multiples of each prime of n/m instead of taking gcds
    keep = np.ones(q, dtype=bool)
    keep[0] = False
    for p, _ in cofactor(m, ctx).factors:
        keep[::p] = False
    return m * np.flatnonzero(keep).astype(np.int64)


def orbit(x, ctx):
    """x, kx, k^2 x, ... (mod n) up to, not including, the first repeat."""
    x = check_int("x", x, lo=0, hi=ctx.n - 1)
    seen = set()
    out = []
    while x not in seen:
        seen.add(x)
        out.append(x)
        x = ctx.k * x % ctx.n
    return out


def root_stratum_cycles(m, ctx):
    """Cycles of x -> kx on a root stratum, each starting at its smallest element.

    Every cycle has length l_k(n/m) and there are phi(n/m) / l_k(n/m) of them.
    """
    m = ctx.check_divisor(m)
    if not is_root_divisor(m, ctx):
        raise ValueError(f"A_{m} is not stable under multiplication by {ctx.k}")
    elems = stratum_elements(m, ctx).tolist()
    seen = set()
    cycles = []
    for x in elems:
        if x in seen:
            continue
        cyc = []
        y = x
        while y not in seen:
            seen.add(y)
            cyc.append(y)
            y = ctx.k * y % ctx.n
        cycles.append(cyc)
    return cycles


def cycle_length(m, ctx):
    """l_k(n/m) for a root stratum."""
    return multiplicative_order(ctx.k, ctx.n // m, cofactor(m, ctx))


def is_kfree(A, ctx):
    """True iff k*x mod n is outside A for every x in A."""
    n, k = ctx.n, ctx.k
    if not isinstance(A, np.ndarray):
        A = [int(x) for x in A]
        if any(x < 0 or x >= n for x in A):
            raise ValueError(f"elements must lie in [0, {n})")
        if n > ARRAY_LIMIT:
            members = set(A)
            return all(k * x % n not in members for x in members)
        A = np.asarray(A, dtype=np.int64)
    elif A.size and (A.min() < 0 or A.max() >= n):
        raise ValueError(f"elements must lie in [0, {n})")
    if A.size == 0:
        return True
    if n > ARRAY_LIMIT:
        members = set(A.tolist())
        return all(k * x % n not in members for x in members)
    a = A.astype(np.int64, copy=False)
    images = (a * k) % n
    if n <= 1 << 26:
        member = np.zeros(n, dtype=bool)
        member[a] = True
        return not member[images].any()
    return not np.isin(images, a).any()
