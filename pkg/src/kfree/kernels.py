"""Hot loops, each in an ``@njit`` flavour and a pure-numpy flavour.

The public names dispatch on :data:`kfree._accel.USE_NUMBA`.  The ``*_jit``
and ``*_numpy`` variants stay importable so tests and the benchmark can pin
a backend explicitly.

All kernels work on int64 arrays.  Callers are responsible for keeping
``k * x`` below 2**63 (every call site bounds ``n`` first).
"""

import numpy as np

from . import _accel
from ._accel import njit

# Sentinel weight for "this vertex may not be selected".
NEG = -(1 << 50)


# --------------------------------------------------------------------------
# maximum independent set on the functional graph x -> succ[x]


@njit
def pseudoforest_mis_jit(succ):
    n = succ.shape[0]
    indeg = np.zeros(n, np.int64)
    for x in range(n):
        indeg[succ[x]] += 1
    inc = np.ones(n, np.int64)
    exc = np.zeros(n, np.int64)
    for x in range(n):
        if succ[x] == x:
            inc[x] = NEG

    stack = np.empty(n, np.int64)
    top = 0
    for x in range(n):
        if indeg[x] == 0:
            stack[top] = x
            top += 1
    while top > 0:
        top -= 1
        x = stack[top]
        p = succ[x]
        exc[p] += max(inc[x], exc[x])
        inc[p] += exc[x]
        indeg[p] -= 1
        if indeg[p] == 0:
            stack[top] = p
            top += 1

    total = 0
    seen = np.zeros(n, np.bool_)
    for c in range(n):
        if indeg[c] == 0 or seen[c]:
            continue
        seen[c] = True
        if succ[c] == c:
            total += exc[c]
            continue
        # a_*: c excluded, b_*: c included
        a_in, a_ex = NEG, exc[c]
        b_in, b_ex = inc[c], NEG
        x = succ[c]
        while x != c:
            seen[x] = True
            a_in, a_ex = a_ex + inc[x], max(a_in, a_ex) + exc[x]
            b_in, b_ex = b_ex + inc[x], max(b_in, b_ex) + exc[x]
            x = succ[x]
        total += max(max(a_in, a_ex), b_ex)
    return total


def pseudoforest_mis_numpy(succ):
    succ = np.ascontiguousarray(succ, dtype=np.int64)
    n = succ.size
    indeg = np.bincount(succ, minlength=n).astype(np.int64)
    inc = np.ones(n, np.int64)
    inc[succ == np.arange(n)] = NEG
    exc = np.zeros(n, np.int64)

    # peel in-trees one layer at a time
    frontier = np.flatnonzero(indeg == 0)
    while frontier.size:
        parents = succ[frontier]
        np.add.at(exc, parents, np.maximum(inc[frontier], exc[frontier]))
        np.add.at(inc, parents, exc[frontier])
        np.subtract.at(indeg, parents, 1)
        cand = np.unique(parents)
        frontier = cand[indeg[cand] == 0]

    succ_l, inc_l, exc_l = succ.tolist(), inc.tolist(), exc.tolist()
    seen = bytearray(n)
    total = 0
    for c in np.flatnonzero(indeg > 0).tolist():
        if seen[c]:
            continue
        seen[c] = 1
        if succ_l[c] == c:
            total += exc_l[c]
            continue
        a_in, a_ex = NEG, exc_l[c]
        b_in, b_ex = inc_l[c], NEG
        x = succ_l[c]
        while x != c:
            seen[x] = 1
            a_in, a_ex = a_ex + inc_l[x], max(a_in, a_ex) + exc_l[x]
            b_in, b_ex = b_ex + inc_l[x], max(b_in, b_ex) + exc_l[x]
            x = succ_l[x]
        total += max(a_in, a_ex, b_ex)
    return total


def pseudoforest_mis(succ):
    """Maximum independent set of the conflict graph {x, succ[x]}.

    Fixed points ``succ[x] == x`` are excluded outright.
    """
    if _accel.USE_NUMBA:
        return int(pseudoforest_mis_jit(np.ascontiguousarray(succ, dtype=np.int64)))
    return int(pseudoforest_mis_numpy(succ))


# --------------------------------------------------------------------------
# exhaustive subset scans (bitmask over at most ~20 points)


@njit
def _subset_tables_jit(img_bits, pre_bits):
    n = img_bits.shape[0]
    size = 1 << n
    img = np.zeros(size, np.int64)
    pre = np.zeros(size, np.int64)
    pop = np.zeros(size, np.int64)
    for j in range(n):
        half = 1 << j
        for s in range(half):
            img[half + s] = img[s] | img_bits[j]
            pre[half + s] = pre[s] | pre_bits[j]
            pop[half + s] = pop[s] + 1
    return img, pre, pop


@njit
def max_free_subset_jit(img_bits):
    img, _, pop = _subset_tables_jit(img_bits, np.zeros_like(img_bits))
    best = 0
    for mask in range(img.shape[0]):
        if img[mask] & mask == 0 and pop[mask] > best:
            best = pop[mask]
    return best


@njit
def min_maximal_free_subset_jit(img_bits, pre_bits):
    img, pre, pop = _subset_tables_jit(img_bits, pre_bits)
    full = img.shape[0] - 1
    best = img_bits.shape[0] + 1
    for mask in range(img.shape[0]):
        if img[mask] & mask == 0 and (mask | img[mask] | pre[mask]) == full:
            if pop[mask] < best:
                best = pop[mask]
    return best


def _subset_tables_numpy(img_bits, pre_bits):
    img = np.zeros(1, np.int64)
    pre = np.zeros(1, np.int64)
    pop = np.zeros(1, np.int64)
    for ib, pb in zip(np.asarray(img_bits).tolist(), np.asarray(pre_bits).tolist()):
        img = np.concatenate([img, img | ib])
        pre = np.concatenate([pre, pre | pb])
        pop = np.concatenate([pop, pop + 1])
    return img, pre, pop


def max_free_subset_numpy(img_bits):
    img, _, pop = _subset_tables_numpy(img_bits, np.zeros_like(img_bits))
    masks = np.arange(img.size, dtype=np.int64)
    return int(pop[(img & masks) == 0].max())


def min_maximal_free_subset_numpy(img_bits, pre_bits):
    img, pre, pop = _subset_tables_numpy(img_bits, pre_bits)
    masks = np.arange(img.size, dtype=np.int64)
    ok = ((img & masks) == 0) & ((masks | img | pre) == img.size - 1)
    return int(pop[ok].min())


def max_free_subset(img_bits):
    """Largest popcount of a mask S with ``image(S) & S == 0``.

    ``img_bits[j]`` is the bitmask of the image of point ``j``.
    """
    img_bits = np.ascontiguousarray(img_bits, dtype=np.int64)
    if _accel.USE_NUMBA:
        return int(max_free_subset_jit(img_bits))
    return max_free_subset_numpy(img_bits)


def min_maximal_free_subset(img_bits, pre_bits):
    """Smallest free mask S that cannot be extended: S | image(S) | preimage(S) is everything."""
    img_bits = np.ascontiguousarray(img_bits, dtype=np.int64)
    pre_bits = np.ascontiguousarray(pre_bits, dtype=np.int64)
    if _accel.USE_NUMBA:
        return int(min_maximal_free_subset_jit(img_bits, pre_bits))
    return min_maximal_free_subset_numpy(img_bits, pre_bits)


# --------------------------------------------------------------------------
# sum of ceil(len/3) over the multiplicative chains i, ik, ik^2, ... in [1, n]


@njit
def interval_orbit_sum_jit(n, k):
    total = 0
    lim = n // k
    for i in range(1, n + 1):
        if i % k == 0:
            continue
        length = 1
        x = i
        while x <= lim:
            x *= k
            length += 1
        total += (length + 2) // 3
    return total


def interval_orbit_sum_numpy(n, k, chunk=1 << 22):
    total = 0
    lim = n // k
    for lo in range(1, n + 1, chunk):
        starts = np.arange(lo, min(lo + chunk, n + 1), dtype=np.int64)
        starts = starts[starts % k != 0]
        length = np.ones(starts.size, np.int64)
        x = starts.copy()
        live = x <= lim
        while live.any():
            x[live] *= k
            length[live] += 1
            live &= x <= lim
        total += int(((length + 2) // 3).sum())
    return total


def interval_orbit_sum(n, k):
    if _accel.USE_NUMBA:
        return int(interval_orbit_sum_jit(n, k))
    return interval_orbit_sum_numpy(n, k)


# --------------------------------------------------------------------------
# alternating picks around the cycles of x -> kx on a k-stable residue set


@njit
def alternating_picks_jit(elems, n, k):
    size = elems.shape[0]
    nxt = np.searchsorted(elems, (elems * k) % n)
    picked = np.zeros(size, np.bool_)
    seen = np.zeros(size, np.bool_)
    for s in range(size):
        if seen[s]:
            continue
        length = 0
        x = s
        while True:
            seen[x] = True
            length += 1
            x = nxt[x]
            if x == s:
                break
        x = s
        for pos in range(length - 1):
            if pos % 2 == 0:
                picked[x] = True
            x = nxt[x]
    return picked


def alternating_picks_numpy(elems, n, k):
    elems = np.asarray(elems, dtype=np.int64)
    size = elems.size
    idx = np.arange(size, dtype=np.int64)
    nxt = np.searchsorted(elems, (elems * k) % n).astype(np.int64)

    # smallest index on each cycle, by pointer doubling
    cmin = idx.copy()
    jump = nxt.copy()
    span = 1
    while span < size:
        cmin = np.minimum(cmin, cmin[jump])
        jump = jump[jump]
        span *= 2

    # cut each cycle just before its minimum and rank the resulting chains
    last = nxt == cmin
    link = np.where(last, idx, nxt)
    dist = np.where(last, 0, 1).astype(np.int64)
    span = 1
    while span < size:
        dist = dist + dist[link]
        link = link[link]
        span *= 2

    length = dist[cmin] + 1
    pos = length - 1 - dist
    return (pos % 2 == 0) & (pos <= length - 2)


def alternating_picks(elems, n, k):
    """Mask over sorted ``elems``: walk every cycle from its smallest element
    and keep positions 0, 2, 4, ... strictly before the last position.

    A cycle of length l yields (l - l % 2) // 2 picks, no two adjacent.
    """
    elems = np.ascontiguousarray(elems, dtype=np.int64)
    if _accel.USE_NUMBA:
        return alternating_picks_jit(elems, n, k)
    return alternating_picks_numpy(elems, n, k)
