"""Deterministic constructors for the named graphs and families.

Every generator returns a :class:`Generated` pair of graph and role map.
Role names used for the template families::

    u1, u2, u3        the path Q = u1 u2 u3
    L{i}.{j}.a / .b   the two ends of the pair L_{i,j}; for i = 2 in the
                      A2/A3/A4 templates ``a`` is v_{1,j} and ``b`` is v_{3,j}
    center            the cut vertex of K1 + sK2 (whose pairs are L1.{j})

Special vertices take the lowest ids: Q first, then the L2 pairs, then the
L1 pairs, then the L3 pairs.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, GraphInputError
from .matching import is_factor_critical


class FamilySpecError(ValueError):
    """Generator parameters outside the family's valid range."""


class Family(str, enum.Enum):
    KN = "KN"
    PN = "PN"
    CN = "CN"
    JOIN = "JOIN"
    UNION = "UNION"
    K1_SK2 = "K1_SK2"
    A1 = "A1"
    A2_PRIME = "A2_PRIME"
    A2_DPRIME = "A2_DPRIME"
    A3_PRIME = "A3_PRIME"
    A3_DPRIME = "A3_DPRIME"
    A4_PRIME = "A4_PRIME"
    A4_DPRIME = "A4_DPRIME"
    HN_SHARP = "HN_SHARP"
    KN_PLUS_COPIES = "KN_PLUS_COPIES"


@dataclass(frozen=True)
class FamilySpec:
    """What to build.

    ``params`` are the integer parameters in the family's natural order
    (``(s,)``, ``(s1, s2, s3)``, ``(s1,)``, ``(n,)`` or ``(n, copies)``).
    ``extra`` applies to the ``*_PRIME`` range families only: an ``int`` seeds
    an independent fair coin per optional edge, a set of ints picks optional
    edges by index in :func:`optional_edges` order.
    """

    tag: Family
    params: tuple[int, ...] = ()
    parts: tuple["FamilySpec", ...] = ()
    extra: int | frozenset[int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", Family(self.tag))
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))


@dataclass(frozen=True)
class Generated:
    graph: Graph
    roles: dict[str, int] = field(default_factory=dict)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise FamilySpecError(msg)


def _arity(spec: FamilySpec, k: int) -> None:
    _need(len(spec.params) == k, f"{spec.tag.value} takes {k} parameter(s), got {spec.params}")


# --- the A templates --------------------------------------------------------

class _Layout:
    """Vertex ids and roles for Q plus the L_{i,j} pairs."""

    def __init__(self, s1: int, s2: int, s3: int) -> None:
        self.roles: dict[str, int] = {"u1": 0, "u2": 1, "u3": 2}
        nxt = 3
        self.pairs: dict[int, list[tuple[int, int]]] = {1: [], 2: [], 3: []}
        for i, s in ((2, s2), (1, s1), (3, s3)):
            for j in range(1, s + 1):
                a, b = nxt, nxt + 1
                nxt += 2
                self.pairs[i].append((a, b))
                self.roles[f"L{i}.{j}.a"] = a
                self.roles[f"L{i}.{j}.b"] = b
        self.n = nxt

    def u(self, i: int) -> int:
        return self.roles[f"u{i}"]


def _a1_edges(lay: _Layout) -> set[tuple[int, int]]:
    u1, u2, u3 = lay.u(1), lay.u(2), lay.u(3)
    es = {(u1, u2), (u2, u3), (u1, u3)}
    for i in (1, 2, 3):
        for a, b in lay.pairs[i]:
            es |= {(a, b), (lay.u(i), a), (lay.u(i), b)}
    return es


def _a2_prime_edges(lay: _Layout) -> set[tuple[int, int]]:
    u1, u2, u3 = lay.u(1), lay.u(2), lay.u(3)
    es = {(u1, u2), (u2, u3)}
    for i in (1, 3):
        for a, b in lay.pairs[i]:
            es |= {(a, b), (lay.u(i), a), (lay.u(i), b)}
    for a, b in lay.pairs[2]:
        es |= {(a, b), (u1, a), (u3, b)}
    return es


def _a2_dprime_edges(lay: _Layout) -> set[tuple[int, int]]:
    u1, u3 = lay.u(1), lay.u(3)
    es = _a2_prime_edges(lay) | {(u1, u3)}
    for a, b in lay.pairs[2]:
        es |= {(u1, b), (u3, a)}
    return es


def _a3_dprime_extra(lay: _Layout) -> set[tuple[int, int]]:
    core = [lay.u(1), lay.u(2), lay.u(3), *lay.pairs[2][0]]
    return {(x, y) for i, x in enumerate(core) for y in core[i + 1:]}


def _a4_prime_edges(lay: _Layout) -> set[tuple[int, int]]:
    (_, v31), (_, v32) = lay.pairs[2]
    return _a2_prime_edges(lay) | {(v31, v32)}


def _a4_dprime_extra(lay: _Layout) -> set[tuple[int, int]]:
    u1, u3 = lay.u(1), lay.u(3)
    (_, v31), (_, v32) = lay.pairs[2]
    return {(u1, u3), (u1, v31), (u1, v32)}


def _norm(es: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    return {(min(e), max(e)) for e in es}


def template_range(tag: Family, params: tuple[int, ...]) -> tuple[_Layout, set, set]:
    """Layout plus (mandatory, all allowed) edge sets of a family template.

    For single graphs the two edge sets coincide.
    """
    tag = Family(tag)
    if tag is Family.A1:
        lay = _Layout(*params)
        es = _norm(_a1_edges(lay))
        return lay, es, es
    if tag in (Family.A2_PRIME, Family.A2_DPRIME):
        lay = _Layout(*params)
        return lay, _norm(_a2_prime_edges(lay)), _norm(_a2_dprime_edges(lay))
    if tag in (Family.A3_PRIME, Family.A3_DPRIME):
        lay = _Layout(params[0], 1, 0)
        lo = _norm(_a2_prime_edges(lay))
        return lay, lo, lo | _norm(_a3_dprime_extra(lay))
    if tag in (Family.A4_PRIME, Family.A4_DPRIME):
        lay = _Layout(params[0], 2, 0)
        lo = _norm(_a4_prime_edges(lay))
        return lay, lo, lo | _norm(_a4_dprime_extra(lay))
    raise FamilySpecError(f"{tag.value} is not a template family")


def optional_edges(tag: Family, params: tuple[int, ...]) -> list[tuple[int, int]]:
    """Edges of the upper template missing from the lower one, sorted."""
    _, lo, hi = template_range(tag, params)
    return sorted(hi - lo)


def _check_template_params(spec: FamilySpec) -> None:
    t, p = spec.tag, spec.params
    if t is Family.A1:
        _arity(spec, 3)
        _need(min(p) >= 0 and sum(p) >= 1, "A1 requires s1, s2, s3 >= 0 and s1 + s2 + s3 >= 1")
    elif t in (Family.A2_PRIME, Family.A2_DPRIME):
        _arity(spec, 3)
        s1, s2, s3 = p
        _need(min(p) >= 0, "A2 parameters must be non-negative")
        _need(s2 >= 1, "A2 requires s2 >= 1")
        _need(s1 + s2 + s3 >= 3, "A2 requires s1 + s2 + s3 >= 3")
        _need((s1 >= 1 and s3 >= 1) or s2 >= 2, "A2 requires (s1 >= 1 and s3 >= 1) or s2 >= 2")
    elif t in (Family.A3_PRIME, Family.A3_DPRIME):
        _arity(spec, 1)
        _need(p[0] >= 2, "A3 requires s1 >= 2")
    elif t in (Family.A4_PRIME, Family.A4_DPRIME):
        _arity(spec, 1)
        _need(p[0] >= 1, "A4 requires s1 >= 1")


def _template(spec: FamilySpec) -> Generated:
    _check_template_params(spec)
    lay, lo, hi = template_range(spec.tag, spec.params)
    if spec.tag in (Family.A2_DPRIME, Family.A3_DPRIME, Family.A4_DPRIME):
        es = hi
    else:
        es = set(lo)
        opt = sorted(hi - lo)
        if isinstance(spec.extra, int) and not isinstance(spec.extra, bool):
            rng = random.Random(spec.extra)
            es |= {e for e in opt if rng.random() < 0.5}
        elif spec.extra is not None:
            for idx in spec.extra:
                if not 0 <= idx < len(opt):
                    raise FamilySpecError(f"optional edge index {idx} out of range (0..{len(opt) - 1})")
                es.add(opt[idx])
    return Generated(Graph.from_edges(lay.n, es), dict(lay.roles))


# --- elementary graphs ------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise FamilySpecError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def union(*graphs: Graph) -> tuple[Graph, list[int]]:
    """Disjoint union; also returns each part's id offset."""
    es: list[tuple[int, int]] = []
    offsets = []
    off = 0
    for h in graphs:
        offsets.append(off)
        es.extend((u + off, v + off) for u, v in h.edges)
        off += h.n
    return Graph.from_edges(off, es), offsets


def join(a: Graph, b: Graph) -> Graph:
    g, (_, off) = union(a, b)
    es = set(g.edges) | {(u, v + off) for u in range(a.n) for v in range(b.n)}
    return Graph.from_edges(g.n, es)


def k1_sk2(s: int) -> Generated:
    es = []
    roles = {"center": 0}
    for j in range(1, s + 1):
        a, b = 2 * j - 1, 2 * j
        es += [(0, a), (0, b), (a, b)]
        roles[f"L1.{j}.a"] = a
        roles[f"L1.{j}.b"] = b
    return Generated(Graph.from_edges(2 * s + 1, es), roles)


def _prefixed(roles: dict[str, int], prefix: str, off: int) -> dict[str, int]:
    return {f"{prefix}.{k}": v + off for k, v in roles.items()}


def generate(spec: FamilySpec) -> Generated:
    """Build the graph described by ``spec`` with its role annotations."""
    t, p = spec.tag, spec.params
    if t is Family.KN:
        _arity(spec, 1)
        _need(p[0] >= 0, "K_n requires n >= 0")
        return Generated(complete(p[0]))
    if t is Family.PN:
        _arity(spec, 1)
        _need(p[0] >= 1, "P_n requires n >= 1")
        return Generated(path(p[0]))
    if t is Family.CN:
        _arity(spec, 1)
        _need(p[0] >= 3, "C_n requires n >= 3")
        return Generated(cycle(p[0]))
    if t in (Family.JOIN, Family.UNION):
        _need(len(spec.parts) == 2, f"{t.value} takes exactly two parts")
        left, right = (generate(q) for q in spec.parts)
        if t is Family.UNION:
            g, _ = union(left.graph, right.graph)
        else:
            g = join(left.graph, right.graph)
        roles = _prefixed(left.roles, "left", 0)
        roles.update(_prefixed(right.roles, "right", left.graph.n))
        return Generated(g, roles)
    if t is Family.K1_SK2:
        _arity(spec, 1)
        _need(p[0] >= 2, "K1 + sK2 requires s >= 2")
        return k1_sk2(p[0])
    if t in (Family.A1, Family.A2_PRIME, Family.A2_DPRIME, Family.A3_PRIME,
             Family.A3_DPRIME, Family.A4_PRIME, Family.A4_DPRIME):
        return _template(spec)
    if t is Family.HN_SHARP:
        _arity(spec, 1)
        _need(p[0] >= 1, "H_n requires n >= 1")
        return sharpness_graph(p[0])
    if t is Family.KN_PLUS_COPIES:
        _arity(spec, 2)
        _need(len(spec.parts) == 1, "KN_PLUS_COPIES takes one part")
        n, copies = p
        _need(n >= 1 and copies >= 1, "KN_PLUS_COPIES requires n >= 1 and copies >= 1")
        return kn_plus_copies(n, copies, generate(spec.parts[0]))
    raise FamilySpecError(f"unknown family {t}")  # pragma: no cover


def kn_plus_copies(n: int, copies: int, part: Generated) -> Generated:
    """``K_n + copies * part``: every clique vertex joined to every copy vertex."""
    body, offsets = union(*([part.graph] * copies))
    g = join(complete(n), body)
    roles = {f"K.{k}": k for k in range(n)}
    for i, off in enumerate(offsets, 1):
        roles.update(_prefixed(part.roles, f"R{i}", off + n))
    return Generated(g, roles)


def sharpness_graph(n: int) -> Generated:
    """``H_n = K_n + (2n+1)(K1 + (K4 u 2K2))``.

    Each block is labelled as the template A''_3(2): cut vertex ``u1``, the
    K4 on ``u2, u3, L2.1.a, L2.1.b``, pairs ``L1.1`` and ``L1.2``.
    """
    block = _template(FamilySpec(Family.A3_DPRIME, (2,)))
    out = kn_plus_copies(n, 2 * n + 1, block)
    roles = {k.replace("K.", "R0.", 1) if k.startswith("K.") else k: v for k, v in out.roles.items()}
    return Generated(out.graph, roles)


def random_factor_critical(order: int, seed: int, extra_edge_prob: float | None = None,
                           max_ear: int | None = None) -> Graph:
    """A random factor-critical graph of the given odd order.

    Grown as an odd cycle followed by random odd ears (paths between old
    vertices, or cycles through one old vertex), then sprinkled with extra
    edges and randomly relabelled. ``max_ear`` caps the number of new
    vertices per ear (and the first cycle at ``max_ear + 1``) and makes half
    the ears cycles through one old vertex, which gives blade-heavy graphs. Deterministic per ``seed``.
    """
    if order < 1 or order % 2 == 0:
        raise GraphInputError(f"order must be odd and positive, got {order}")
    rng = random.Random(seed)
    if order == 1:
        return Graph.empty(1)
    cap = order if max_ear is None else max(2, max_ear)
    first = rng.randrange(3, min(order, cap + 1) + 1, 2)
    es: set[tuple[int, int]] = {(min(i, (i + 1) % first), max(i, (i + 1) % first)) for i in range(first)}
    n = first
    while n < order:
        inner = 2 * rng.randint(1, min(order - n, cap) // 2)
        x = rng.randrange(n)
        y = x if max_ear is not None and rng.random() < 0.5 else rng.randrange(n)
        seq = [x, *range(n, n + inner), y]
        for a, b in zip(seq, seq[1:]):
            es.add((min(a, b), max(a, b)))
        n += inner
    p = rng.uniform(0.0, 0.4) if extra_edge_prob is None else extra_edge_prob
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in es and rng.random() < p:
                es.add((u, v))
    perm = list(range(n))
    rng.shuffle(perm)
    g = Graph.from_edges(n, [(perm[u], perm[v]) for u, v in es])
    if not is_factor_critical(g):  # pragma: no cover - ear construction guarantees it
        raise AssertionError("ear construction produced a non factor-critical graph")
    return g


def random_connected_graph(n: int, seed: int, density: float | None = None) -> Graph:
    """Random spanning tree plus independent extra edges; deterministic per ``seed``.

    ``density`` is the extra-edge probability; when omitted it is drawn
    uniformly from [0, 1) so a corpus mixes sparse and dense graphs.
    """
    if n < 1:
        raise GraphInputError("n must be positive")
    rng = random.Random(seed)
    p = rng.random() if density is None else density
    order = list(range(n))
    rng.shuffle(order)
    es = set()
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        es.add((min(a, b), max(a, b)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in es and rng.random() < p:
                es.add((u, v))
    return Graph.from_edges(n, es)
