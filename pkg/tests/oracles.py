"""Independent reference computations used by the tests.

Nothing here calls into the package's matching, census or search code: these
are deliberately naive so that agreement means something.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx


def to_nx(g, keep=None) -> nx.Graph:
    h = nx.Graph()
    vs = range(g.n) if keep is None else keep
    h.add_nodes_from(vs)
    ks = set(vs)
    h.add_edges_from((u, v) for u, v in g.edges if u in ks and v in ks)
    return h


def component_orders(g, removed=()) -> dict[int, int]:
    rm = set(removed)
    h = to_nx(g, [v for v in range(g.n) if v not in rm])
    out: dict[int, int] = {}
    for c in nx.connected_components(h):
        out[len(c)] = out.get(len(c), 0) + 1
    return out


def nu(g, keep=None) -> int:
    return len(nx.max_weight_matching(to_nx(g, keep), maxcardinality=True))


def has_perfect_matching(g, keep) -> bool:
    keep = list(keep)
    return len(keep) % 2 == 0 and 2 * nu(g, keep) == len(keep)


def factor_critical(g, keep=None) -> bool:
    vs = list(range(g.n)) if keep is None else list(keep)
    if len(vs) % 2 == 0:
        return False
    return all(has_perfect_matching(g, [u for u in vs if u != v]) for v in vs)


def subsets(n: int):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def max_deficiency(g) -> int:
    best = None
    for x in subsets(g.n):
        orders = component_orders(g, x)
        d = sum(k for i, k in orders.items() if i % 2) - len(x)
        best = d if best is None else max(best, d)
    return best


def condition_violation(g, weights, slope, offset):
    """First X (by size, then lexicographic) with lhs > rhs, or None."""
    for x in subsets(g.n):
        orders = component_orders(g, x)
        lhs = sum((Fraction(w) * orders.get(i, 0) for i, w in weights.items()), Fraction(0))
        if lhs > Fraction(slope) * len(x) + Fraction(offset):
            return x
    return None


def has_factor(g, k: int) -> bool:
    """Plain recursion over path covers: lowest uncovered vertex starts a path or sits inside one."""
    top = 2 * k + 1
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)

    def paths_through(v, free, size):
        # every path of the given order containing v, built as two arms from v
        def arms(end, used, length):
            if length == 0:
                yield []
                return
            for w in adj[end]:
                if w in free and w not in used:
                    for rest in arms(w, used | {w}, length - 1):
                        yield [w, *rest]

        for left in range(size):
            for a in arms(v, {v}, left):
                used = {v, *a}
                for b in arms(v, used, size - 1 - left):
                    yield {v, *a, *b}

    def solve(free: frozenset) -> bool:
        if not free:
            return True
        v = min(free)
        for size in (2, top):
            for p in paths_through(v, free, size):
                if solve(free - p):
                    return True
        return False

    return solve(frozenset(range(g.n)))
