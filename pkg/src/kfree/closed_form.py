"""Closed-form evaluations of R_k(n) for special shapes of (k, n).

These are fast paths.  The divisor-forest solver in :mod:`kfree.forest` is
the reference answer; :func:`cross_check` runs every applicable formula next
to it and raises :class:`InconsistencyError` on any disagreement.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import (
    MAX_INT,
    check_int,
    divisor_values,
    euler_phi,
    factorize,
    is_prime,
    multiplicative_order,
)

METHODS = ("coprime", "km", "k2m", "thm5", "forest", "oracle")


class InconsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


@dataclass(frozen=True)
class RkValue:
    value: int
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")

    def __int__(self):
        return self.value


def odd(l):
    """Indicator of odd integers."""
    return l & 1


def rk_coprime(k, n):
    """R_k(n) for gcd(k, n) = 1.

    (n - 1)/2 minus, over divisors d > 1 whose order l = l_k(d) is odd,
    phi(d) / (2 l).  The sum is carried out in exact rationals and must
    come out integral.
    """
    n = check_int("n", n)
    k = check_int("k", k)
    if gcd(k, n) != 1:
        raise ValueError(f"gcd(k={k}, n={n}) != 1")
    total = Fraction(n - 1, 2)
    for d in divisor_values(n)[1:]:
        fd = factorize(d)
        l = multiplicative_order(k, d, fd)
        if odd(l):
            total -= Fraction(euler_phi(fd), 2 * l)
    if total.denominator != 1:
        raise InconsistencyError(f"non-integral coprime value {total} for k={k}, n={n}")
    return RkValue(int(total), "coprime")


def rk_km(k, m):
    """R_k(km) = (k - 1) m when k does not divide m."""
    k = check_int("k", k)
    m = check_int("m", m)
    if m % k == 0:
        raise ValueError(f"k={k} divides m={m}")
    check_int("n", k * m)
    return RkValue((k - 1) * m, "km")


def rk_k2m(k, m):
    """R_k(k^2 m) = R_k(m) + (k^2 - k) m, unrolled while k^2 divides the argument.

    The remaining base R_k(m') comes from the forest solver.
    """
    from .forest import rk_general

    k = check_int("k", k)
    m = check_int("m", m)
    check_int("n", k * k * m)
    acc = (k * k - k) * m
    cur = m
    if k > 1:
        while cur % (k * k) == 0:
            cur //= k * k
            acc += (k * k - k) * cur
    return RkValue(acc + rk_general(k, cur).value, "k2m")


def _valuation(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def theorem5_shapes(k, n):
    """Shapes (p, v, u, alpha, q, beta) with k = u p^v, v in {1, 2}, n = p^alpha q^beta.

    ``q`` and ``beta`` are None for a prime-power n.  u must be coprime to
    every prime of n.
    """
    f = factorize(n)
    if len(f.factors) not in (1, 2):
        return []
    shapes = []
    for idx, (p, alpha) in enumerate(f.factors):
        v = _valuation(k, p)
        if v not in (1, 2):
            continue
        u = k // p**v
        if len(f.factors) == 2:
            q, beta = f.factors[1 - idx]
            if u % q == 0:
                continue
        else:
            q, beta = None, None
        shapes.append((p, v, u, alpha, q, beta))
    shapes.sort(key=lambda s: -s[1])  # u p^2 before u p
    return shapes


def _theorem5_value(k, n, shape, literal):
    from .forest import root_valuation
    from .strata import make_context

    p, v, u, alpha, q, beta = shape
    step = 2 * v
    qpows = [1] if q is None else [q**j for j in range(beta, -1, -1)]
    # n/m = p^a * qpow; terms with a = 0 have m = root, whose stratum is
    # never taken whole
    total = 0
    for qpow in qpows:
        for i in range((alpha - 1) // step + 1):
            exps = [alpha - step * i] + ([alpha - step * i - 1] if v == 2 else [])
            for a in exps:
                if a == 0 and not literal:
                    continue
                total += euler_phi(p**a * qpow)
    if not literal and alpha % step == 0:
        # both children of each root stay unpicked, so the root stratum counts
        ctx = make_context(k, n)
        for qpow in qpows:
            total += root_valuation(n // qpow, ctx)
    return total


def rk_theorem5(k, n, literal=False):
    """R_k(n) for k = u p or u p^2 and n = p^alpha or p^alpha q^beta (u prime to n).

    Returns None when (k, n) has none of these shapes.

    With ``literal=True`` the four totient sums are evaluated exactly as
    usually stated.  Those sums count the stratum of each tree root as a
    whole (k = u p^2, alpha = 1 mod 4) and drop the root's own k-free share
    when neither child of the root is picked (alpha even for k = u p,
    alpha = 0 mod 4 for k = u p^2).  Both effects vanish for prime-power n
    and k = u p, but not in general: R_2(12) = 7 while the literal sum gives
    6.  The default evaluation applies both corrections.
    """
    n = check_int("n", n)
    k = check_int("k", k)
    shapes = theorem5_shapes(k, n)
    if not shapes:
        return None
    values = {s: _theorem5_value(k, n, s, literal) for s in shapes}
    if len(set(values.values())) > 1:
        raise InconsistencyError(f"shape evaluations disagree for k={k}, n={n}: {values}")
    return RkValue(next(iter(values.values())), "thm5")


def mersenne_rk(m):
    """R_2(2^m - 1) for a Mersenne prime, using l_2(2^m - 1) = m.

    For odd m this is (n-1)/2 - (n-1)/(2m).  m = 2 (n = 3) has even order,
    so nothing is subtracted.
    """
    m = check_int("m", m, lo=2, hi=62)
    n = (1 << m) - 1
    if not is_prime(n):
        raise ValueError(f"2^{m} - 1 = {n} is not prime")
    value = Fraction(n - 1, 2) - odd(m) * Fraction(n - 1, 2 * m)
    if value.denominator != 1:
        raise InconsistencyError(f"non-integral Mersenne value {value}")
    return RkValue(int(value), "coprime")


@dataclass(frozen=True)
class SidonBound:
    m: int
    n: int
    rk: int
    rk_log_form: float
    printed: float
    printed_floor: int | None
    exact: float
    exact_floor: int
    warning: str | None


def sidon_bound(m):
    """Upper bounds on a 2-fold Sidon set in Z/nZ, n = 2^m - 1 prime.

    Since the nonzero differences of such a set are distinct and form a
    2-free set, |A|(|A| - 1) <= R_2(n).

    ``exact`` is sqrt(R_2(n) + 1/4) + 1/2 with the exact R_2(n).
    ``printed`` is sqrt((n-1)/2 - (n-1)/log2(n-1) + 1/4) + 1/2, the commonly
    quoted form, which uses log2(n - 1) in place of the order m = log2(n + 1)
    and a different factor on the subtracted term.  Both are reported.
    """
    rk = mersenne_rk(m).value
    n = (1 << m) - 1
    warning = None
    log_term = math.log2(n - 1)
    rk_log = (n - 1) / 2 - (n - 1) / (2 * log_term)
    radicand = (n - 1) / 2 - (n - 1) / log_term + 0.25
    if radicand < 0:
        printed = math.nan
        printed_floor = None
        warning = f"m={m}: printed radicand {radicand:.4g} is negative"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
    else:
        printed = math.sqrt(radicand) + 0.5
        printed_floor = math.floor(printed)
    exact = math.sqrt(rk + 0.25) + 0.5
    # largest a with a(a - 1) <= rk, computed without floating point
    exact_floor = (1 + isqrt(4 * rk + 1)) // 2
    return SidonBound(m, n, rk, rk_log, printed, printed_floor, exact, exact_floor, warning)


def density_identity_check(k, m):
    """True iff R_k(k^(2m)) == k (k^(2m) - 1) / (k + 1) exactly."""
    from .forest import rk_general

    k = check_int("k", k, lo=2)
    m = check_int("m", m)
    if 2 * m * math.log2(k) > 63:
        raise OverflowError(f"{k}^{2 * m} exceeds {MAX_INT}")
    big = k ** (2 * m)
    return rk_general(k, big).value * (k + 1) == k * (big - 1)


def coprime_deficit(k, n):
    """(n - 1)/2 - R_k(n) for gcd(k, n) = 1, as an exact Fraction."""
    return Fraction(n - 1, 2) - rk_coprime(k, n).value


def applicable(k, n):
    """Closed-form evaluations that apply to (k, n), keyed by method tag."""
    out = {}
    if gcd(k, n) == 1:
        out["coprime"] = rk_coprime(k, n)
    if k > 1 and n % k == 0 and (n // k) % k:
        out["km"] = rk_km(k, n // k)
    if k > 1 and n % (k * k) == 0:
        out["k2m"] = rk_k2m(k, n // (k * k))
    t5 = rk_theorem5(k, n)
    if t5 is not None:
        out["thm5"] = t5
    return out


def cross_check(k, n):
    """Forest value plus every applicable closed form; raises on disagreement."""
    from .forest import rk_general

    ref = rk_general(k, n)
    others = applicable(k, n)
    bad = {name: v.value for name, v in others.items() if v.value != ref.value}
    if bad:
        raise InconsistencyError(f"k={k}, n={n}: forest={ref.value}, disagreeing: {bad}")
    return ref, others
