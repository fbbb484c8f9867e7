"""Smallest inclusion-maximal k-free subsets of [1, n].

[1, n] splits into chains i, ik, ik^2, ... (k not dividing i, truncated at
n).  A set is k-free and maximal exactly when, on every chain of length l,
its trace E in [1, l] has property (P): it meets {1, 2}, meets {l-1, l},
has no two consecutive positions and meets every window {i-1, i, i+1}.
The smallest such trace has ceil(l/3) positions, so the minimum over [1, n]
is the sum of ceil(l/3) over the chains.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import check_int
from .kernels import interval_orbit_sum

# largest n for which a witness is listed explicitly
CONSTRUCT_LIMIT = 10**8


@dataclass(frozen=True)
class IntervalOrbit:
    start: int
    length: int

    def elements(self, k):
        out = [self.start]
        for _ in range(self.length - 1):
            out.append(out[-1] * k)
        return out


@dataclass
class IntervalSolution:
    n: int
    k: int
    elements: list
    starts: np.ndarray = field(repr=False)
    lengths: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.elements)

    def pattern(self, i):
        """Positions (1-based along the chain of i) that the solution uses."""
        j = int(np.searchsorted(self.starts, i))
        if j == self.starts.size or self.starts[j] != i:
            raise KeyError(i)
        return min_pattern(int(self.lengths[j]))


def _check_k(k):
    k = check_int("k", k)
    if k < 2:
        raise ValueError("k must be >= 2 (with k = 1 every x equals 1*x)")
    return k


def orbit_length(i, k, n):
    """max t with i k^(t-1) <= n, by repeated multiplication."""
    length = 1
    lim = n // k
    while i <= lim:
        i *= k
        length += 1
    return length


def interval_orbits(k, n):
    k = _check_k(k)
    n = check_int("n", n, lo=0)
    return [IntervalOrbit(i, orbit_length(i, k, n)) for i in range(1, n + 1) if i % k]


def h_value(l):
    """Minimum size of a trace with property (P) on a chain of length l."""
    l = check_int("l", l)
    return -(-l // 3)


def min_pattern(l):
    """A smallest (P)-trace on [1, l].

    l = 3u or 3u - 1: {2, 5, ..., 3u - 1};  l = 3u - 2: {1, 4, ..., 3u - 2}.
    """
    l = check_int("l", l)
    u = h_value(l)
    first = 1 if l % 3 == 1 else 2
    return [first + 3 * t for t in range(u)]


def satisfies_p(positions, l):
    """Property (P) for a set of positions in [1, l].

    For l <= 2 the four conditions collapse to "exactly one position".
    """
    E = set(positions)
    if not E <= set(range(1, l + 1)):
        return False
    if not (1 in E or 2 in E) or not (l - 1 in E or l in E):
        return False
    if any(i + 1 in E for i in E):
        return False
    return all(E & {i - 1, i, i + 1} for i in range(2, l))


def tilde_rk(k, n):
    """Smallest size of an inclusion-maximal k-free subset of [1, n]."""
    k = _check_k(k)
    n = check_int("n", n, lo=0)
    if n == 0:
        return 0
    return interval_orbit_sum(n, k)


def tilde_rk_by_levels(k, n):
    """Same quantity, counting chain starts level by level.

    Starts of chains with length exactly t lie in (n / k^t, n / k^(t-1)];
    O(log n) work, used to cross-check the per-chain sum.
    """
    k = _check_k(k)
    n = check_int("n", n, lo=0)

    def free_upto(x):  # integers in [1, x] not divisible by k
        return x - x // k

    total = 0
    hi, t = n, 1
    while hi >= 1:
        lo = hi // k
        total += (free_upto(hi) - free_upto(lo)) * -(-t // 3)
        hi, t = lo, t + 1
    return total


def _chain_lengths(starts, k, n):
    # length of i, ik, ik^2, ... inside [1, n] is 1 + #{t >= 1 : i <= n // k^t}
    lengths = np.ones(starts.size, dtype=np.int64)
    bound = n // k
    while bound >= 1:
        lengths += starts <= bound
        bound //= k
    return lengths


def construct_min_maximal(k, n):
    """An inclusion-maximal k-free subset of [1, n] of size tilde_rk(k, n).

    Chain i, ik, ... of length l contributes i k^(p-1) for p in min_pattern(l).
    """
    k = _check_k(k)
    n = check_int("n", n, lo=0, hi=CONSTRUCT_LIMIT)
    starts = np.arange(1, n + 1, dtype=np.int64)
    starts = starts[starts % k != 0]
    lengths = _chain_lengths(starts, k, n)
    first = np.where(lengths % 3 == 1, 1, 2)
    parts = []
    p, kpow = 1, 1
    while starts.size and p <= int(lengths.max()):
        use = (p <= lengths) & (p >= first) & ((p - first) % 3 == 0)
        parts.append(starts[use] * kpow)
        p, kpow = p + 1, kpow * k
    elements = np.sort(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)
    return IntervalSolution(n, k, elements.tolist(), starts, lengths)


def is_maximal_kfree_interval(A, k, n):
    """A is k-free (no x = k y inside A) and no z in [1, n] outside A can be added."""
    k = _check_k(k)
    n = check_int("n", n, lo=0, hi=CONSTRUCT_LIMIT)
    a = np.unique(np.asarray(list(A) if not isinstance(A, np.ndarray) else A, dtype=np.int64))
    if a.size and (a[0] < 1 or a[-1] > n):
        raise ValueError(f"elements must lie in [1, {n}]")
    member = np.zeros(n + 1, dtype=bool)
    member[a] = True
    z = np.arange(1, n + 1, dtype=np.int64)
    # z blocked from above: kz in A
    up = np.zeros(n, dtype=bool)
    low = z[: n // k]
    up[: n // k] = member[low * k]
    if (member[1:] & up).any():
        return False
    # z blocked from below: z = k y with y in A
    down = np.zeros(n, dtype=bool)
    down[k - 1 :: k] = member[1 : n // k + 1]
    return bool((member[1:] | up | down).all())


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    exact: int
    main_term: Fraction
    error: Fraction
    scaled_error: float  # error / log_k(n)^2


def main_term(k, n):
    return Fraction(k * k * n, k * k + k + 1)


def asymptotic_report(k, n_grid):
    """Exact values against k^2 n / (k^2 + k + 1); rows with n < 2 are skipped."""
    k = _check_k(k)
    rows = []
    for n in n_grid:
        n = check_int("n", n, lo=0)
        if n < 2:
            continue
        exact = tilde_rk(k, n)
        mt = main_term(k, n)
        err = exact - mt
        scale = math.log(n, k) ** 2
        rows.append(AsymptoticRow(n, exact, mt, err, float(err) / scale))
    return rows
