"""Reference answers computed without the strata/forest machinery.

* ``oracle_rk_exhaustive``: every subset of Z/nZ (n <= 20).
* ``oracle_rk_components``: every subset of each connected component of the
  graph {x, kx}, for moduli whose components are small.
* ``oracle_rk_pseudoforest``: maximum independent set of the conflict graph
  {x, kx}, which is a functional graph (every vertex has out-degree one), by
  tree DP into each cycle and a two-pass DP around the cycle.
* ``oracle_tilde_exhaustive``: every subset of [1, n] (n <= 18).
* ``oracle_selection_exhaustive``: every vertex subset of a small forest.
"""

from dataclasses import dataclass

import numpy as np

from .arith import check_int
from .forest import Selection
from .kernels import max_free_subset, min_maximal_free_subset, pseudoforest_mis

EXHAUSTIVE_MAX_N = 20
TILDE_EXHAUSTIVE_MAX_N = 18
PSEUDOFOREST_MAX_N = 10**6
SELECTION_MAX_NODES = 16


@dataclass
class PseudoforestGraph:
    n: int
    k: int
    successor: np.ndarray

    @classmethod
    def build(cls, k, n):
        n = check_int("n", n, hi=PSEUDOFOREST_MAX_N)
        k = check_int("k", k) % n
        return cls(n, k, (k * np.arange(n, dtype=np.int64)) % n)

    @property
    def forbidden(self):
        """Fixed points: kx = x, so x can never be taken."""
        return self.successor == np.arange(self.n)

    def cycles(self):
        """Every cycle of the functional graph, each listed from its smallest vertex."""
        succ = self.successor
        indeg = np.bincount(succ, minlength=self.n)
        frontier = np.flatnonzero(indeg == 0)
        while frontier.size:
            parents = succ[frontier]
            np.subtract.at(indeg, parents, 1)
            cand = np.unique(parents)
            frontier = cand[indeg[cand] == 0]
        succ_l = succ.tolist()
        seen = set()
        out = []
        for c in np.flatnonzero(indeg > 0).tolist():
            if c in seen:
                continue
            cyc = [c]
            seen.add(c)
            x = succ_l[c]
            while x != c:
                cyc.append(x)
                seen.add(x)
                x = succ_l[x]
            out.append(cyc)
        return out

    def census(self):
        """(number of cycles of length >= 2, number of fixed points)."""
        lengths = [len(c) for c in self.cycles()]
        return sum(1 for l in lengths if l > 1), sum(1 for l in lengths if l == 1)


def oracle_rk_exhaustive(k, n):
    """max |A| over all A in Z/nZ with kA disjoint from A, by full enumeration."""
    n = check_int("n", n, hi=EXHAUSTIVE_MAX_N)
    k = check_int("k", k)
    img = np.array([1 << (k * x % n) for x in range(n)], dtype=np.int64)
    return max_free_subset(img)


def oracle_rk_components(k, n):
    """Full enumeration, one connected component of the graph {x, kx} at a time.

    Components never constrain each other, so the maximum is the sum of the
    per-component maxima.  Every component must have at most 20 vertices.
    """
    n = check_int("n", n, hi=PSEUDOFOREST_MAX_N)
    k = check_int("k", k)
    succ = [k * x % n for x in range(n)]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in enumerate(succ):
        parent[find(x)] = find(y)
    comps = {}
    for x in range(n):
        comps.setdefault(find(x), []).append(x)
    total = 0
    for members in comps.values():
        if len(members) > EXHAUSTIVE_MAX_N:
            raise OverflowError(f"component of size {len(members)} exceeds {EXHAUSTIVE_MAX_N}")
        pos = {x: i for i, x in enumerate(members)}
        img = np.array([1 << pos[succ[x]] for x in members], dtype=np.int64)
        total += max_free_subset(img)
    return total


def oracle_rk_pseudoforest(k, n):
    """Maximum independent set of the graph with edges {x, kx mod n}, kx != x.

    Vertices with kx = x are excluded.
    """
    g = PseudoforestGraph.build(k, n)
    return pseudoforest_mis(g.successor)


def oracle_tilde_exhaustive(k, n):
    """min |A| over inclusion-maximal k-free A in [1, n], by full enumeration."""
    n = check_int("n", n, hi=TILDE_EXHAUSTIVE_MAX_N)
    k = check_int("k", k)
    if k < 2:
        raise ValueError("k must be >= 2")
    img = np.array([1 << (k * x - 1) if k * x <= n else 0 for x in range(1, n + 1)], dtype=np.int64)
    pre = np.array([1 << (x // k - 1) if x % k == 0 else 0 for x in range(1, n + 1)], dtype=np.int64)
    return min_maximal_free_subset(img, pre)


@dataclass(frozen=True)
class SelectionSearch:
    selection: Selection
    unique: bool
    feasible: int  # number of subsets satisfying the selection constraint


def oracle_selection_exhaustive(forest):
    """Best vertex set with no (parent, child) pair and no zero weight, by enumeration."""
    order = sorted(forest.nodes)
    size = len(order)
    if size > SELECTION_MAX_NODES:
        raise ValueError(f"forest has {size} nodes, enumeration limit is {SELECTION_MAX_NODES}")
    pos = {m: i for i, m in enumerate(order)}
    masks = np.arange(1 << size, dtype=np.int64)
    ok = np.ones(masks.size, dtype=bool)
    total = np.zeros(masks.size, dtype=np.int64)
    for i, m in enumerate(order):
        node = forest.nodes[m]
        bit = (masks >> i) & 1
        if node.alpha == 0:
            ok &= bit == 0
        total += bit * node.alpha
        if node.parent is not None:
            ok &= (bit & (masks >> pos[node.parent]) & 1) == 0
    feasible_totals = total[ok]
    best = int(feasible_totals.max())
    winners = masks[ok][feasible_totals == best]
    chosen = frozenset(order[i] for i in range(size) if (int(winners[0]) >> i) & 1)
    return SelectionSearch(Selection(chosen, best), winners.size == 1, int(ok.sum()))
