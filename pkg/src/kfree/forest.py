"""The divisor forest and the bottom-up selection that solves the general case.

Vertices are the divisors m of n, the parent of m is the divisor m' with
k . A_m = A_m' (when m' != m).  Each vertex carries a weight alpha: the full
stratum size phi(n/m) for non-roots, and the best k-free share of the
stratum for roots.  The greedy pass picks, level by level from the bottom,
every vertex with non-zero weight none of whose children was picked; the
union of the picked strata (alternating cycle elements on root strata) is a
maximum k-free set.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .arith import multiplicative_order
from .closed_form import RkValue
from .kernels import alternating_picks
from .strata import (
    ModulusContext,
    cofactor,
    is_kfree,
    is_root_divisor,
    make_context,
    stratum_elements,
)

CONSTRUCT_LIMIT = 10**8


@dataclass
class DivisorNode:
    m: int
    exponents: tuple
    level: int
    parent: int | None
    children: list
    alpha: int
    is_root: bool
    is_leaf: bool
    root: int


@dataclass
class Forest:
    ctx: ModulusContext
    nodes: dict
    roots: list

    def __len__(self):
        return len(self.nodes)

    def tree(self, root):
        """Divisors of the tree hanging below ``root``, ascending."""
        return sorted(m for m, node in self.nodes.items() if node.root == root)

    def edges(self):
        return sorted((node.parent, m) for m, node in self.nodes.items() if node.parent is not None)

    def depth(self, m):
        """Level measured by walking to the root (1 for a root)."""
        d = 1
        while self.nodes[m].parent is not None:
            m = self.nodes[m].parent
            d += 1
        return d


@dataclass(frozen=True)
class Selection:
    chosen: frozenset
    total: int


@dataclass
class KFreeSet:
    n: int
    k: int
    elements: np.ndarray = field(repr=False)

    def __len__(self):
        return int(self.elements.size)

    def __contains__(self, x):
        i = np.searchsorted(self.elements, x)
        return bool(i < self.elements.size and self.elements[i] == x)

    def tolist(self):
        return self.elements.tolist()

    def is_kfree(self):
        return is_kfree(self.elements, make_context(self.k, self.n))


def _coerce(ctx_or_k, n=None):
    if isinstance(ctx_or_k, ModulusContext):
        return ctx_or_k
    return make_context(ctx_or_k, n)


def root_valuation(m, ctx):
    """Size of a largest k-free subset of the root stratum A_m.

    With l = l_k(n/m): (phi(n/m) / l) cycles, each contributing (l - l % 2) / 2.
    """
    m = ctx.check_divisor(m)
    if not is_root_divisor(m, ctx):
        raise ValueError(f"{m} is not a root: gcd(k, n/m) != 1")
    if m == ctx.n:
        return 0
    q = cofactor(m, ctx)
    phi = 1
    for p, e in q.factors:
        phi *= p ** (e - 1) * (p - 1)
    length = multiplicative_order(ctx.k, ctx.n // m, q)
    cycles, rem = divmod(phi, length)
    assert rem == 0
    return cycles * ((length - length % 2) // 2)


def build_forest(ctx):
    """Divisor forest of (n, k): one node per divisor, parent = k * m."""
    primes = ctx.n_fact.primes
    top = ctx.n_fact.exponents
    kexp = [0] * len(primes)
    for p, _, ki in ctx.shared:
        kexp[primes.index(p)] = ki
    shared_idx = [i for i, ki in enumerate(kexp) if ki]

    def value(exps):
        out = 1
        for p, e in zip(primes, exps):
            out *= p**e
        return out

    nodes = {}
    for exps in product(*(range(e + 1) for e in top)):
        m = value(exps)
        is_root = all(exps[i] == top[i] for i in shared_idx)
        if is_root:
            parent = None
            alpha = root_valuation(m, ctx)
            j_m = 0
        else:
            up = list(exps)
            for i in shared_idx:
                up[i] += min(kexp[i], top[i] - exps[i])
            parent = value(up)
            alpha = 1
            for p, e, a in zip(primes, top, exps):
                if e > a:
                    alpha *= p ** (e - a - 1) * (p - 1)
            j_m = max(-(-(top[i] - exps[i]) // kexp[i]) for i in shared_idx)
        root = value([top[i] if kexp[i] else exps[i] for i in range(len(primes))])
        is_leaf = any(exps[i] < min(kexp[i], top[i]) for i in shared_idx)
        nodes[m] = DivisorNode(m, exps, j_m + 1, parent, [], alpha, is_root, is_leaf, root)

    for m in sorted(nodes):
        parent = nodes[m].parent
        if parent is not None:
            nodes[parent].children.append(m)
    roots = sorted(m for m, node in nodes.items() if node.is_root)
    return Forest(ctx, nodes, roots)


def select_optimal(forest):
    """Bottom-up greedy selection, tree by tree.

    Within a tree, nodes are visited from the deepest level up; a node is
    taken iff its weight is non-zero and none of its children was taken.
    """
    chosen = set()
    by_tree = {}
    for m, node in forest.nodes.items():
        by_tree.setdefault(node.root, []).append(node)
    for root in forest.roots:
        for node in sorted(by_tree[root], key=lambda v: (-v.level, v.m)):
            if node.alpha and not any(c in chosen for c in node.children):
                chosen.add(node.m)
    total = sum(forest.nodes[m].alpha for m in chosen)
    return Selection(frozenset(chosen), total)


def rk_general(ctx_or_k, n=None):
    """Exact R_k(n) for any k, n via the divisor forest.

    Accepts a :class:`ModulusContext` or the pair ``(k, n)``.
    """
    ctx = _coerce(ctx_or_k, n)
    if ctx.annihilating:
        # kx = 0 for every x: everything except 0 is free
        return RkValue(ctx.n - 1, "forest")
    sel = select_optimal(build_forest(ctx))
    return RkValue(sel.total, "forest")


def rk(k, n):
    return rk_general(make_context(k, n)).value


def construct_max_kfree(ctx_or_k, n=None):
    """A k-free set of size R_k(n): picked strata whole, root strata alternately."""
    ctx = _coerce(ctx_or_k, n)
    if ctx.n > CONSTRUCT_LIMIT:
        raise ValueError(f"n={ctx.n} is too large to list a witness (limit {CONSTRUCT_LIMIT})")
    if ctx.annihilating:
        return KFreeSet(ctx.n, ctx.k, np.arange(1, ctx.n, dtype=np.int64))
    forest = build_forest(ctx)
    sel = select_optimal(forest)
    parts = [np.zeros(0, dtype=np.int64)]
    for m in sorted(sel.chosen):
        elems = stratum_elements(m, ctx)
        if forest.nodes[m].is_root:
            elems = elems[alternating_picks(elems, ctx.n, ctx.k)]
        parts.append(elems)
    return KFreeSet(ctx.n, ctx.k, np.sort(np.concatenate(parts)))


def divisor_label(exponents, primes):
    parts = [str(p) if e == 1 else f"{p}^{e}" for p, e in zip(primes, exponents) if e]
    return "·".join(parts) or "1"


def forest_to_dot(forest, selection=None):
    """Graphviz digraph, one cluster per tree, parent -> child edges.

    Nodes in ``selection`` are drawn as boxes.  Output is deterministic:
    trees by ascending root, nodes and edges by ascending divisor.
    """
    primes = forest.ctx.n_fact.primes
    chosen = selection.chosen if selection is not None else frozenset()
    lines = [
        "digraph kfree {",
        f'  label="k={forest.ctx.k_input}, n={forest.ctx.n}";',
        "  node [shape=ellipse];",
    ]
    for t, root in enumerate(forest.roots):
        members = forest.tree(root)
        root_label = divisor_label(forest.nodes[root].exponents, primes)
        lines.append(f"  subgraph cluster_{t} {{")
        lines.append(f'    label="root {root_label}";')
        for m in members:
            node = forest.nodes[m]
            label = f"{divisor_label(node.exponents, primes)} (α={node.alpha})"
            shape = ", shape=box" if m in chosen else ""
            lines.append(f'    "{m}" [label="{label}"{shape}];')
        for m in members:
            for c in forest.nodes[m].children:
                lines.append(f'    "{m}" -> "{c}";')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CONSTRUCT_LIMIT",
    "DivisorNode",
    "Forest",
    "KFreeSet",
    "Selection",
    "build_forest",
    "construct_max_kfree",
    "forest_to_dot",
    "rk",
    "rk_general",
    "root_valuation",
    "select_optimal",
]
