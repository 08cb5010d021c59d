"""Path systems in an auxiliary bipartite graph (S, T) with distinguished
T-subsets T1, T2 and a forbidden edge set L.

:func:`construct` either covers ``S | T1 | T2`` by node-disjoint paths, each
a single edge (shape I) or an L-free path through T1 whose two ends are the
only T2 nodes on it (shape II), or returns a Hall-type witness showing that
one of the two counting hypotheses fails.

Phase 1 works in ``(G - L)[S | T1 | T2]``: match T1 first, then absorb the
uncovered T2 nodes one at a time with a layered search whose augmentations
splice shape-II paths together. Phase 2 uses all edges and absorbs the
uncovered S nodes through shape-I flips.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import GraphInputError, SearchBudgetExceeded

Node = tuple[str, int]  # ("S", id) or ("T", id)


@dataclass(frozen=True)
class AuxiliaryBipartite:
    s_side: tuple[int, ...]
    t_side: tuple[int, ...]
    adjacency: frozenset[tuple[int, int]]  # (s, t)
    forbidden: frozenset[tuple[int, int]] = frozenset()
    t1: frozenset[int] = frozenset()
    t2: frozenset[int] = frozenset()

    @classmethod
    def build(cls, s_side: Iterable[int], t_side: Iterable[int], adjacency: Iterable[tuple[int, int]],
              forbidden: Iterable[tuple[int, int]] = (), t1: Iterable[int] = (),
              t2: Iterable[int] = ()) -> AuxiliaryBipartite:
        aux = cls(tuple(sorted(s_side)), tuple(sorted(t_side)),
                  frozenset((int(s), int(t)) for s, t in adjacency),
                  frozenset((int(s), int(t)) for s, t in forbidden),
                  frozenset(t1), frozenset(t2))
        aux.validate()
        return aux

    def validate(self) -> None:
        if len(set(self.s_side)) != len(self.s_side) or len(set(self.t_side)) != len(self.t_side):
            raise GraphInputError("duplicate node ids")
        ss, ts = set(self.s_side), set(self.t_side)
        if any(s not in ss or t not in ts for s, t in self.adjacency):
            raise GraphInputError("adjacency must lie in S x T")
        if not self.forbidden <= self.adjacency:
            raise GraphInputError("forbidden edges must be a subset of the adjacency")
        if self.t1 & self.t2:
            raise GraphInputError("t1 and t2 overlap")
        if not (self.t1 | self.t2) <= ts:
            raise GraphInputError("t1 and t2 must lie in the T side")

    def s_neighbors(self, s: int, allowed: frozenset | None = None) -> list[int]:
        return sorted(t for (x, t) in (allowed if allowed is not None else self.adjacency) if x == s)


@dataclass(frozen=True)
class AuxPath:
    nodes: tuple[Node, ...]

    @property
    def shape(self) -> str:
        return "I" if len(self.nodes) == 2 else "II"


@dataclass(frozen=True)
class AuxPathSystem:
    paths: tuple[AuxPath, ...]
    augmentations: int = 0


@dataclass(frozen=True)
class HallWitness:
    """``side`` is ``"S_SIDE"`` (``|N(X)| < |X|``) or ``"T_SIDE"``
    (``|N_{G-L}(Y)| < |Y & T1| + |Y & T2| / 2``)."""

    side: str
    nodes: tuple[int, ...]
    neighborhood_size: int
    bound: Fraction

    def holds(self) -> bool:
        return self.neighborhood_size < self.bound


def _nbrs(edges: Iterable[tuple[int, int]]) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    s_adj: dict[int, list[int]] = {}
    t_adj: dict[int, list[int]] = {}
    for s, t in sorted(edges):
        s_adj.setdefault(s, []).append(t)
        t_adj.setdefault(t, []).append(s)
    return s_adj, t_adj


def s_neighborhood(aux: AuxiliaryBipartite, s_nodes: Iterable[int], allow_forbidden: bool = True) -> set[int]:
    xs = set(s_nodes)
    edges = aux.adjacency if allow_forbidden else aux.adjacency - aux.forbidden
    return {t for s, t in edges if s in xs}


def t_neighborhood(aux: AuxiliaryBipartite, t_nodes: Iterable[int], allow_forbidden: bool = False) -> set[int]:
    ys = set(t_nodes)
    edges = aux.adjacency if allow_forbidden else aux.adjacency - aux.forbidden
    return {s for s, t in edges if t in ys}


def _t_witness(aux: AuxiliaryBipartite, ys: Iterable[int]) -> HallWitness:
    ys = tuple(sorted(set(ys)))
    nb = t_neighborhood(aux, ys)
    bound = sum(1 for y in ys if y in aux.t1) + Fraction(sum(1 for y in ys if y in aux.t2), 2)
    w = HallWitness("T_SIDE", ys, len(nb), bound)
    assert w.holds(), "internal error: T-side witness does not violate the bound"
    return w


def _s_witness(aux: AuxiliaryBipartite, xs: Iterable[int]) -> HallWitness:
    xs = tuple(sorted(set(xs)))
    nb = s_neighborhood(aux, xs)
    w = HallWitness("S_SIDE", xs, len(nb), Fraction(len(xs)))
    assert w.holds(), "internal error: S-side witness does not violate the bound"
    return w


def _split_matching(path: list[Node], skip: int) -> list[list[Node]]:
    """Perfect matching of ``path`` minus the node at index ``skip`` (consecutive pairs)."""
    out = []
    for part in (path[:skip], path[skip + 1:]):
        assert len(part) % 2 == 0
        out.extend([part[i], part[i + 1]] for i in range(0, len(part), 2))
    return out


class _Forest:
    """Current path system with a node -> path-index map."""

    def __init__(self) -> None:
        self.paths: dict[int, list[Node]] = {}
        self.where: dict[Node, int] = {}
        self._next = 0

    def add(self, nodes: list[Node]) -> None:
        pid = self._next
        self._next += 1
        self.paths[pid] = list(nodes)
        for x in nodes:
            assert x not in self.where
            self.where[x] = pid

    def remove(self, pid: int) -> list[Node]:
        nodes = self.paths.pop(pid)
        for x in nodes:
            del self.where[x]
        return nodes

    def ordered(self) -> list[list[Node]]:
        return sorted(self.paths.values())


def _match_t1(aux: AuxiliaryBipartite, s_adj_h, t_adj_h, forest: _Forest) -> HallWitness | None:
    """Kuhn augmenting paths saturating T1 inside ``H``."""
    mate_s: dict[int, int] = {}
    mate_t: dict[int, int] = {}
    for t0 in sorted(aux.t1):
        parent: dict[int, int] = {}  # s -> t it was reached from
        seen_t = {t0}
        q = deque([t0])
        end = None
        while q and end is None:
            t = q.popleft()
            for s in t_adj_h.get(t, ()):
                if s in parent:
                    continue
                parent[s] = t
                if s not in mate_s:
                    end = s
                    break
                nt = mate_s[s]
                if nt not in seen_t:
                    seen_t.add(nt)
                    q.append(nt)
        if end is None:
            return _t_witness(aux, seen_t)
        s = end
        while True:
            t = parent[s]
            prev = mate_t.get(t)
            mate_s[s] = t
            mate_t[t] = s
            if prev is None:
                break
            s = prev
    for t, s in sorted(mate_t.items()):
        forest.add([("T", t), ("S", s)])
    return None


def _chain(parent: dict[int, tuple[int, Node, Node] | None], pid: int) -> list[tuple[int, Node | None, Node | None]]:
    """Layer chain ``[(piece, parent_node, entry_node), ...]`` from a root to ``pid``."""
    out = []
    cur: int | None = pid
    while cur is not None:
        link = parent[cur]
        if link is None:
            out.append((cur, None, None))
            cur = None
        else:
            par, via, entry = link
            out.append((cur, via, entry))
            cur = par
    out.reverse()
    return out


def _phase1_absorb_t2(aux: AuxiliaryBipartite, s_adj_h, t_adj_h, forest: _Forest) -> HallWitness | None | bool:
    """One layered search from all uncovered T2 nodes.

    Returns ``True`` after an augmentation, ``None`` when T2 is covered and a
    witness when the structure saturates.
    """
    roots = [t for t in sorted(aux.t2) if ("T", t) not in forest.where]
    if not roots:
        return None
    # pieces: forest path ids, roots get negative ids holding a singleton
    pieces: dict[int, list[Node]] = {}
    parent: dict[int, tuple[int, Node, Node] | None] = {}
    layer: list[int] = []
    for i, t in enumerate(roots):
        pid = -(i + 1)
        pieces[pid] = [("T", t)]
        parent[pid] = None
        layer.append(pid)
    visited_paths: set[int] = set()
    while layer:
        nxt: list[int] = []
        for pid in layer:
            for node in pieces[pid]:
                if node[0] != "T":
                    continue
                for s in t_adj_h.get(node[1], ()):
                    sn = ("S", s)
                    owner = forest.where.get(sn)
                    if owner is None:
                        _augment_new_s(forest, pieces, parent, pid, node, sn)
                        return True
                    if owner in visited_paths:
                        continue
                    visited_paths.add(owner)
                    pieces[owner] = forest.paths[owner]
                    parent[owner] = (pid, node, sn)
                    path = forest.paths[owner]
                    if len(path) == 2 and next(x for x in path if x[0] == "T")[1] in aux.t2:
                        _splice(forest, pieces, parent, owner)
                        return True
                    nxt.append(owner)
        layer = nxt
    ys = [x[1] for p in pieces.values() for x in p if x[0] == "T"]
    return _t_witness(aux, ys)


def _augment_new_s(forest: _Forest, pieces, parent, pid: int, via: Node, new_s: Node) -> None:
    """Absorb an uncovered S node at the end of the chain ending in ``pid``."""
    chain = _chain(parent, pid)
    links = [via_ for _, via_, _ in chain[1:]] + [via]  # T node of A_j linking to A_{j+1}
    entries = [entry for _, _, entry in chain[1:]] + [new_s]  # S node of A_{j+1}
    k = max(j for j, (p, _, _) in enumerate(chain) if len(pieces[p]) % 2 == 1)
    new_paths: list[list[Node]] = []
    for j in range(k, len(chain)):
        p = chain[j][0]
        nodes = forest.remove(p) if p >= 0 else pieces[p]
        if j == k:
            new_paths.extend(_split_matching(nodes, nodes.index(links[j])))
        new_paths.append([links[j], entries[j]])
    for path in new_paths:
        forest.add(path)


def _splice(forest: _Forest, pieces, parent, last: int) -> None:
    """Absorb a root T2 node by re-threading the chain into shape-II paths."""
    chain = _chain(parent, last)
    i = len(chain) - 1
    oriented: list[list[Node]] = []
    t_idx: list[int | None] = []
    s_idx: list[int | None] = []
    for j, (p, _, entry) in enumerate(chain):
        nodes = list(pieces[p])
        link_out = chain[j + 1][1] if j < i else None
        if j == 0:
            oriented.append(nodes)
            t_idx.append(0)
            s_idx.append(None)
            continue
        if j == i:
            if nodes[0] != entry:
                nodes.reverse()
            oriented.append(nodes)
            t_idx.append(None)
            s_idx.append(0)
            continue
        t, s = nodes.index(link_out), nodes.index(entry)
        if t > s:
            nodes.reverse()
            t, s = len(nodes) - 1 - t, len(nodes) - 1 - s
        oriented.append(nodes)
        t_idx.append(t)
        s_idx.append(s)
    for p, _, _ in chain:
        if p >= 0:
            forest.remove(p)
    out: list[list[Node]] = []
    cur = oriented[0][: t_idx[0] + 1]
    for j in range(1, i + 1):
        a, s = oriented[j], s_idx[j]
        if j == i:
            cur += a[s:]
            out.append(cur)
        elif len(a) == 2:
            cur += [a[s], a[t_idx[j]]]
        else:
            t = t_idx[j]
            cur += a[s:]
            out.append(cur)
            mid = a[t + 1:s]
            out.extend([mid[x], mid[x + 1]] for x in range(0, len(mid), 2))
            cur = a[: t + 1]
    for path in out:
        forest.add(path)


def _phase2_absorb_s(aux: AuxiliaryBipartite, s_adj_g, forest: _Forest) -> HallWitness | None | bool:
    roots = [s for s in aux.s_side if ("S", s) not in forest.where]
    if not roots:
        return None
    pieces: dict[int, list[Node]] = {}
    parent: dict[int, tuple[int, Node, Node] | None] = {}
    layer = []
    for i, s in enumerate(roots):
        pid = -(i + 1)
        pieces[pid] = [("S", s)]
        parent[pid] = None
        layer.append(pid)
    visited: set[int] = set()
    next_single = -(len(roots) + 1)
    while layer:
        nxt = []
        for pid in layer:
            for node in pieces[pid]:
                if node[0] != "S":
                    continue
                for t in s_adj_g.get(node[1], ()):
                    tn = ("T", t)
                    owner = forest.where.get(tn)
                    if owner is None:
                        # uncovered T node: a singleton piece of odd order
                        pieces[next_single] = [tn]
                        parent[next_single] = (pid, node, tn)
                        _flip(forest, pieces, parent, next_single)
                        return True
                    if owner in visited:
                        continue
                    visited.add(owner)
                    pieces[owner] = forest.paths[owner]
                    parent[owner] = (pid, node, tn)
                    if len(forest.paths[owner]) % 2 == 1:
                        _flip(forest, pieces, parent, owner)
                        return True
                    nxt.append(owner)
        layer = nxt
    xs = [x[1] for p in pieces.values() for x in p if x[0] == "S"]
    return _s_witness(aux, xs)


def _flip(forest: _Forest, pieces, parent, last: int) -> None:
    chain = _chain(parent, last)
    new_paths: list[list[Node]] = []
    for j in range(1, len(chain)):
        p, via, entry = chain[j]
        nodes = forest.remove(p) if p >= 0 else pieces[p]
        new_paths.append([via, entry])
        if j == len(chain) - 1:
            new_paths.extend(_split_matching(nodes, nodes.index(entry)))
    for path in new_paths:
        forest.add(path)


def _phase1_invariant(aux: AuxiliaryBipartite, forest: _Forest) -> None:
    for t in aux.t1:
        assert ("T", t) in forest.where
    for path in forest.paths.values():
        if len(path) > 2:
            assert path[0][0] == "T" and path[-1][0] == "T"
            assert path[0][1] in aux.t2 and path[-1][1] in aux.t2
            assert all(x[1] in aux.t1 for x in path[1:-1] if x[0] == "T")


def construct(aux: AuxiliaryBipartite) -> AuxPathSystem | HallWitness:
    """Build a shape-I/II path system covering ``S | T1 | T2`` or return a violated-hypothesis witness."""
    aux.validate()
    inside = aux.t1 | aux.t2
    h_edges = [(s, t) for s, t in aux.adjacency - aux.forbidden if t in inside]
    s_adj_h, t_adj_h = _nbrs(h_edges)
    s_adj_g, _ = _nbrs(aux.adjacency)
    forest = _Forest()
    steps = 0
    w = _match_t1(aux, s_adj_h, t_adj_h, forest)
    if w is not None:
        return w
    while True:
        r = _phase1_absorb_t2(aux, s_adj_h, t_adj_h, forest)
        if r is None:
            break
        if isinstance(r, HallWitness):
            return r
        steps += 1
        _phase1_invariant(aux, forest)
    while True:
        r = _phase2_absorb_s(aux, s_adj_g, forest)
        if r is None:
            break
        if isinstance(r, HallWitness):
            return r
        steps += 1
    system = AuxPathSystem(tuple(AuxPath(tuple(p)) for p in forest.ordered()), steps)
    ok, why = verify_aux_system(aux, system)
    assert ok, f"internal error: constructed system fails {why}"
    return system


def verify_aux_system(aux: AuxiliaryBipartite, system: AuxPathSystem) -> tuple[bool, str | None]:
    """Check every path-system clause; returns ``(ok, first failed clause)``."""
    seen: set[Node] = set()
    for path in system.paths:
        nodes = path.nodes
        if len(nodes) < 2:
            return False, "paths have at least two nodes"
        if seen & set(nodes) or len(set(nodes)) != len(nodes):
            return False, "paths are node-disjoint"
        seen.update(nodes)
        edges = []
        for a, b in zip(nodes, nodes[1:]):
            if {a[0], b[0]} != {"S", "T"}:
                return False, "consecutive nodes alternate sides"
            e = (a[1], b[1]) if a[0] == "S" else (b[1], a[1])
            if e not in aux.adjacency:
                return False, "edges exist in G"
            edges.append(e)
        if len(nodes) == 2:
            continue
        if any(e in aux.forbidden for e in edges):
            return False, "E(A) ⊆ E(G)−L"
        ts = [x[1] for x in nodes if x[0] == "T"]
        if any(t not in aux.t1 and t not in aux.t2 for t in ts):
            return False, "V(A)∩T ⊆ T1∪T2"
        ends = [x for x in nodes if x[0] == "T" and x[1] in aux.t2]
        if len(ends) != 2:
            return False, "|V(A)∩T2| = 2"
        if {nodes[0], nodes[-1]} != set(ends):
            return False, "T2 nodes are the endvertices"
    if any(("S", s) not in seen for s in aux.s_side):
        return False, "covers S"
    if any(("T", t) not in seen for t in aux.t1):
        return False, "covers T1"
    if any(("T", t) not in seen for t in aux.t2):
        return False, "covers T2"
    return True, None


def witness_holds(aux: AuxiliaryBipartite, w: HallWitness) -> bool:
    """Recount a witness from scratch."""
    if w.side == "S_SIDE":
        return len(s_neighborhood(aux, w.nodes)) < len(w.nodes)
    ys = set(w.nodes)
    if not ys <= (aux.t1 | aux.t2):
        return False
    rhs = len(ys & aux.t1) + Fraction(len(ys & aux.t2), 2)
    return len(t_neighborhood(aux, ys)) < rhs


def brute_force_hypotheses(aux: AuxiliaryBipartite, budget: int = 18) -> bool:
    """Exhaustively test both counting hypotheses."""
    ts = sorted(aux.t1 | aux.t2)
    if len(aux.s_side) > budget or len(ts) > budget:
        raise SearchBudgetExceeded(f"brute force limited to {budget} nodes per side")
    s_adj, _ = _nbrs(aux.adjacency)
    _, t_adj_h = _nbrs(aux.adjacency - aux.forbidden)
    s_list = list(aux.s_side)
    for r in range(1, len(s_list) + 1):
        for xs in itertools.combinations(s_list, r):
            nb = set()
            for s in xs:
                nb.update(s_adj.get(s, ()))
            if len(nb) < len(xs):
                return False
    for r in range(1, len(ts) + 1):
        for ys in itertools.combinations(ts, r):
            nb = set()
            for t in ys:
                nb.update(t_adj_h.get(t, ()))
            need2 = sum(2 if y in aux.t1 else 1 for y in ys)
            if 2 * len(nb) < need2:
                return False
    return True
