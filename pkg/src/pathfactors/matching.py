"""Maximum matching in general graphs, factor-criticality and barrier sets.

The barrier returned by :func:`select_barrier` maximises the deficiency
``c_odd(G - S) - |S|`` and leaves only odd, factor-critical components.
It is not guaranteed to have the largest possible ``|S|`` among maximisers;
:func:`deficiency_oracle` gives that exactly, by exhaustive search.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, GraphInputError, bits, component_masks, induced, popcount

Edge = tuple[int, int]


class DomainError(ValueError):
    """An operation was applied outside its mathematical preconditions."""


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _mate_array(g: Graph, alive: int) -> list[int]:
    """Edmonds' blossom algorithm restricted to the vertices in ``alive``.

    Returns ``mate`` with ``mate[v] == -1`` for exposed (or dead) vertices.
    Deterministic: vertices are scanned in increasing id order.
    """
    n = g.n
    adj = [list(bits(g.adj[v] & alive)) if alive >> v & 1 else [] for v in range(n)]
    mate = [-1] * n

    # greedy warm start
    for v in bits(alive):
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v] = w
                    mate[w] = v
                    break

    for root in bits(alive):
        if mate[root] != -1:
            continue
        base = list(range(n))
        parent = [-1] * n
        used = [False] * n
        used[root] = True
        q = deque([root])
        found = -1

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if mate[a] == -1:
                    break
                a = parent[mate[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[mate[b]]

        def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[mate[v]]] = True
                parent[v] = child
                child = mate[v]
                v = parent[mate[v]]

        while q and found == -1:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        found = to
                        break
                    used[mate[to]] = True
                    q.append(mate[to])
        v = found
        while v != -1:
            pv = parent[v]
            ppv = mate[pv]
            mate[v] = pv
            mate[pv] = v
            v = ppv
    return mate


def _pairs(mate: list[int]) -> frozenset[Edge]:
    return frozenset((v, w) for v, w in enumerate(mate) if v < w)


def maximum_matching(g: Graph, alive: int | None = None) -> frozenset[Edge]:
    """A maximum matching of ``g`` (or of ``g[alive]``) as a set of ``(u, v)``, ``u < v``."""
    if alive is None:
        alive = g.full_mask
    return _pairs(_mate_array(g, alive))


def matching_number(g: Graph, alive: int | None = None) -> int:
    if alive is None:
        alive = g.full_mask
    return sum(1 for v, w in enumerate(_mate_array(g, alive)) if v < w)


def perfect_matching(g: Graph, alive: int | None = None) -> frozenset[Edge] | None:
    """A perfect matching of ``g[alive]``, or ``None`` if there is none."""
    if alive is None:
        alive = g.full_mask
    if popcount(alive) % 2:
        return None
    mate = _mate_array(g, alive)
    if any(mate[v] == -1 for v in bits(alive)):
        return None
    return _pairs(mate)


def is_matching(g: Graph, m: Iterable[Edge]) -> bool:
    seen = 0
    for u, v in m:
        if not g.has_edge(u, v):
            return False
        if seen >> u & 1 or seen >> v & 1:
            return False
        seen |= 1 << u | 1 << v
    return True


def is_factor_critical(g: Graph, alive: int | None = None) -> bool:
    """True iff ``g[alive]`` has odd order and ``g[alive] - v`` has a perfect matching for every ``v``."""
    if alive is None:
        alive = g.full_mask
    if popcount(alive) % 2 == 0:
        return False
    for v in bits(alive):
        if perfect_matching(g, alive & ~(1 << v)) is None:
            return False
    return True


def _gallai_edmonds_barrier(g: Graph, alive: int) -> int:
    """The set A(G) = N(D) - D of the Gallai-Edmonds decomposition of ``g[alive]``.

    D is the set of vertices missed by at least one maximum matching; A(G)
    attains the maximum deficiency (Tutte-Berge).
    """
    nu = matching_number(g, alive)
    d = 0
    for v in bits(alive):
        if matching_number(g, alive & ~(1 << v)) == nu:
            d |= 1 << v
    nbr = 0
    for v in bits(d):
        nbr |= g.adj[v]
    return nbr & alive & ~d


def deficiency(g: Graph, s: int, alive: int | None = None) -> int:
    """``c_odd(g[alive] - s) - |s|`` for a vertex mask ``s``."""
    if alive is None:
        alive = g.full_mask
    odd = sum(1 for c in component_masks(g, alive & ~s) if popcount(c) % 2)
    return odd - popcount(s)


def tutte_witness(g: Graph) -> list[int] | None:
    """For even-order ``g``: ``None`` if a perfect matching exists, otherwise a
    set ``S`` with ``c_odd(g - S) >= |S| + 2``."""
    if g.n % 2:
        raise GraphInputError("tutte_witness needs a graph of even order")
    if perfect_matching(g) is not None:
        return None
    s = _gallai_edmonds_barrier(g, g.full_mask)
    assert deficiency(g, s) >= 2
    return list(bits(s))


@dataclass(frozen=True)
class BarrierResult:
    """Barrier ``s`` with the components of ``G - s`` and the deficiency."""

    s: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    deficiency: int


def select_barrier(g: Graph) -> BarrierResult:
    """A maximum-deficiency set whose complement has only odd factor-critical components.

    Starts from the Gallai-Edmonds set, then repairs: even components lose
    their lowest vertex to ``S``; a non-factor-critical odd component ``C``
    with a bad vertex ``v`` contributes ``{v}`` plus a Tutte set of ``C - v``.
    Both moves keep the deficiency and strictly grow ``S``.
    """
    full = g.full_mask
    s = _gallai_edmonds_barrier(g, full)
    target = deficiency(g, s)
    while True:
        comps = component_masks(g, full & ~s)
        for c in comps:
            if popcount(c) % 2 == 0:
                s |= c & -c
                break
        else:
            for c in comps:
                bad = next((v for v in bits(c) if perfect_matching(g, c & ~(1 << v)) is None), None)
                if bad is None:
                    continue
                rest = c & ~(1 << bad)
                s |= (1 << bad) | _gallai_edmonds_barrier(g, rest)
                break
            else:
                break
        assert deficiency(g, s) == target
    comps = component_masks(g, full & ~s)
    return BarrierResult(
        s=tuple(bits(s)),
        components=tuple(tuple(bits(c)) for c in comps),
        deficiency=target,
    )


def deficiency_oracle(g: Graph, limit: int = 22) -> tuple[int, list[int]]:
    """Exhaustive maximum of ``c_odd(g - X) - |X|`` over all ``X``.

    Among maximisers returns one of largest cardinality (smallest mask on
    ties).
    """
    if g.n > limit:
        raise GraphInputError(f"deficiency_oracle limited to n <= {limit}")
    best = None
    best_x = 0
    full = g.full_mask
    for x in range(1 << g.n):
        d = deficiency(g, x, full)
        if best is None or d > best or (d == best and popcount(x) > popcount(best_x)):
            best, best_x = d, x
    return best, list(bits(best_x))


def matching_of_induced(g: Graph, keep: Iterable[int]) -> frozenset[Edge]:
    """Maximum matching of ``g[keep]`` in original ids."""
    sub, old = induced(g, keep)
    return frozenset(_edge(old[a], old[b]) for a, b in maximum_matching(sub))
