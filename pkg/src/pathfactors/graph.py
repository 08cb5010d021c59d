"""Simple undirected graphs on dense integer ids, component census, text I/O.

Vertex sets are passed around either as iterables of ids or as int bitmasks;
bitmasks are what the hot loops (census over many subsets) use.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class GraphInputError(ValueError):
    """Malformed graph data or an out-of-range vertex id."""


class SearchBudgetExceeded(RuntimeError):
    """An exponential search ran past its caller-supplied node budget."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with vertices ``0..n-1``.

    ``edges`` holds pairs ``(u, v)`` with ``u < v``; ``adj[v]`` is the
    neighbourhood of ``v`` as a bitmask.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        if n < 0:
            raise GraphInputError(f"negative vertex count {n}")
        adj = [0] * n
        norm: set[tuple[int, int]] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphInputError(f"self-loop at {u}")
            if u > v:
                u, v = v, u
            if (u, v) in norm:
                raise GraphInputError(f"duplicate edge ({u}, {v})")
            norm.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, frozenset(norm), tuple(adj))

    @classmethod
    def empty(cls, n: int = 0) -> Graph:
        return cls.from_edges(n, ())

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def check_vertices(self, vertices: Iterable[int]) -> int:
        """Validate ids and return them as a mask."""
        m = 0
        for v in vertices:
            if not 0 <= v < self.n:
                raise GraphInputError(f"vertex {v} out of range for n={self.n}")
            m |= 1 << v
        return m

    def __len__(self) -> int:
        return self.n


def popcount(x: int) -> int:
    return x.bit_count()


def component_masks(g: Graph, alive: int) -> list[int]:
    """Connected components of ``g[alive]`` as bitmasks, ordered by lowest vertex."""
    adj = g.adj
    out = []
    rest = alive
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nb = 0
            for v in bits(frontier):
                nb |= adj[v]
            frontier = nb & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def components(g: Graph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Components of ``g - removed``, each sorted, ordered by smallest vertex."""
    rm = g.check_vertices(removed)
    return [list(bits(c)) for c in component_masks(g, g.full_mask & ~rm)]


def order_counts(g: Graph, alive: int) -> Counter[int]:
    """Multiset of component orders of ``g[alive]`` (hot path, no validation)."""
    return Counter(popcount(c) for c in component_masks(g, alive))


@dataclass(frozen=True)
class ComponentCensus:
    """``counts[i]`` is the number of components of order ``i``."""

    counts: dict[int, int]

    def c(self, i: int) -> int:
        return self.counts.get(i, 0)

    @property
    def c1(self) -> int:
        return self.c(1)

    @property
    def c3(self) -> int:
        return self.c(3)

    @property
    def c5(self) -> int:
        return self.c(5)

    @property
    def c7(self) -> int:
        return self.c(7)

    @property
    def c_odd(self) -> int:
        return sum(k for i, k in self.counts.items() if i % 2)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def vertex_total(self) -> int:
        return sum(i * k for i, k in self.counts.items())

    def weighted(self, weights: dict[int, Fraction]) -> Fraction:
        return sum((Fraction(w) * self.c(i) for i, w in weights.items()), Fraction(0))


def census(g: Graph, removed: Iterable[int] = ()) -> ComponentCensus:
    rm = g.check_vertices(removed)
    return ComponentCensus(dict(order_counts(g, g.full_mask & ~rm)))


def induced(g: Graph, keep: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``keep`` relabelled to ``0..k-1``.

    Returns the graph and the translation table ``new id -> old id``.
    """
    km = g.check_vertices(keep)
    old = list(bits(km))
    new = {v: i for i, v in enumerate(old)}
    es = [(new[u], new[v]) for (u, v) in g.edges if km >> u & 1 and km >> v & 1]
    return Graph.from_edges(len(old), es), old


def is_connected(g: Graph, alive: int | None = None) -> bool:
    if alive is None:
        alive = g.full_mask
    return len(component_masks(g, alive)) <= 1


def has_hamiltonian_path(g: Graph, budget: int | None = 2_000_000) -> bool:
    """Whether ``g`` has a spanning path.

    Backtracking with forced moves through degree-one vertices and a
    connectivity cut on the unvisited remainder. Meant for small graphs
    (oracles, n up to about 20). Raises :class:`SearchBudgetExceeded` when
    more than ``budget`` search nodes are expanded.
    """
    n = g.n
    if n <= 1:
        return True
    full = g.full_mask
    if not is_connected(g):
        return False
    adj = g.adj
    deg1 = [v for v in range(n) if popcount(adj[v]) == 1]
    if len(deg1) > 2:
        return False
    nodes = 0

    def extend(end: int, unvisited: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchBudgetExceeded(f"hamiltonian path search exceeded {budget} nodes")
        if not unvisited:
            return True
        cand = adj[end] & unvisited
        if not cand:
            return False
        # the rest of the path runs inside ``unvisited``, so it must be connected
        if len(component_masks(g, unvisited)) > 1:
            return False
        # a vertex with a single remaining neighbour can only be the final vertex
        reach = unvisited | (1 << end)
        if popcount(unvisited) > 1:
            tips = 0
            for v in bits(unvisited):
                if popcount(adj[v] & reach) == 1:
                    tips += 1
                    if tips > 1:
                        return False
        for v in bits(cand):
            if extend(v, unvisited & ~(1 << v)):
                return True
        return False

    starts = deg1 if deg1 else list(range(n))
    for s in starts:
        if extend(s, full & ~(1 << s)):
            return True
    return False


# --- text format -----------------------------------------------------------

def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    """Serialise to ``p <n> <m>`` followed by ``u v`` lines (u < v, sorted)."""
    lines = [f"# {c}" if not c.startswith("#") else c for c in comments]
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> tuple[Graph, list[str]]:
    """Parse the text format; returns the graph and its comment lines."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    comments: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3 or parts[0] != "p":
                raise GraphInputError(f"line {lineno}: expected 'p <n> <m>'")
            header = (int(parts[1]), int(parts[2]))
            continue
        if len(parts) != 2:
            raise GraphInputError(f"line {lineno}: expected '<u> <v>'")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise GraphInputError(f"line {lineno}: edge must satisfy u < v")
        edges.append((u, v))
    if header is None:
        raise GraphInputError("missing 'p <n> <m>' header")
    n, m = header
    if m != len(edges):
        raise GraphInputError(f"header declares {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges), comments


def read_graph(path: str) -> tuple[Graph, list[str]]:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())
