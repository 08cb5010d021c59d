"""Factor-critical (hypomatchable) graphs: ears, excluded families, crush sets,
alternating paths.

Family recognition is structural. A *blade* is an edge ``ab`` with
``N(a) = {b, h}`` and ``N(b) = {a, h}``, i.e. a triangle hanging off the hub
``h``. Stripping all blades leaves a small core (one vertex, a triangle, or
at most ``3 + 2 s2`` vertices for the A2 template) whose roles are searched
directly; the result is then compared edge by edge against the template
range from :mod:`pathfactors.generators`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .generators import Family, template_range
from .graph import (Graph, GraphInputError, bits, component_masks, has_hamiltonian_path,
                    induced, order_counts, popcount)
from .matching import DomainError, is_factor_critical, perfect_matching

Edge = tuple[int, int]


def _e(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# --- alternating paths ------------------------------------------------------

def _check_near_perfect(g: Graph, v: int, m: Iterable[Edge]) -> dict[int, int]:
    mate: dict[int, int] = {}
    for a, b in m:
        if not g.has_edge(a, b):
            raise GraphInputError(f"({a}, {b}) is not an edge")
        if a in mate or b in mate:
            raise GraphInputError("matching edges overlap")
        mate[a] = b
        mate[b] = a
    if v in mate or len(mate) != g.n - 1:
        raise GraphInputError(f"not a perfect matching of G - {v}")
    return mate


def alternating_path_to(g: Graph, v: int, m: Iterable[Edge], w: int) -> list[int]:
    """Odd-order alternating path from ``v`` to ``w`` whose removal leaves
    ``m - E(Q)`` a perfect matching of the rest.

    ``m`` must be a perfect matching of ``g - v``. The path is the component
    of ``m`` xor (a perfect matching of ``g - w``) that contains ``v``.
    """
    mate = _check_near_perfect(g, v, m)
    if w == v:
        return [v]
    other = perfect_matching(g, g.full_mask & ~(1 << w))
    if other is None:
        raise DomainError(f"G - {w} has no perfect matching; G is not factor-critical")
    omate: dict[int, int] = {}
    for a, b in other:
        omate[a] = b
        omate[b] = a
    q = [v]
    cur = v
    use_other = True
    while cur != w:
        cur = omate[cur] if use_other else mate[cur]
        q.append(cur)
        use_other = not use_other
    return q


def k1_sk2_center(g: Graph) -> int | None:
    """The centre ``c`` if ``g`` is K1 + sK2 with s >= 2, else ``None``."""
    if g.n < 5 or g.n % 2 == 0 or g.m != 3 * (g.n - 1) // 2:
        return None
    full = g.full_mask
    for c in range(g.n):
        if g.adj[c] != full & ~(1 << c):
            continue
        rest = full & ~(1 << c)
        if all(popcount(g.adj[x] & rest) == 1 for x in bits(rest)):
            return c
    return None


def long_alternating_path(g: Graph, v: int, m: Iterable[Edge]) -> list[int]:
    """Odd-order alternating path of order at least 5 starting at ``v``.

    Requires ``|V| >= 5`` and, when ``g`` is K1 + sK2, that ``v`` is not its
    cut vertex.
    """
    m = list(m)
    mate = _check_near_perfect(g, v, m)
    if g.n < 5:
        raise DomainError("long alternating paths need |V(G)| >= 5")
    if k1_sk2_center(g) == v:
        raise DomainError(f"hypothesis failed: {v} is the unique cutvertex of a K1 + sK2")
    non_nbrs = g.full_mask & ~g.adj[v] & ~(1 << v)
    if not non_nbrs:
        for x, y in sorted(g.edges):
            if v in (x, y) or mate[x] == y:
                continue
            q = [v, mate[x], x, y, mate[y]]
            return q
        raise DomainError("hypothesis failed: G - v is a perfect matching with no edge between its edges")
    u = non_nbrs & -non_nbrs
    w = mate[u.bit_length() - 1]
    q = alternating_path_to(g, v, m, w)
    assert len(q) >= 5
    return q


def is_alternating(g: Graph, q: Sequence[int], m: Iterable[Edge]) -> bool:
    """``q`` is a path of ``g`` with ``q[2i-1] q[2i] in m`` (0-based: pairs (1,2), (3,4), ...)."""
    ms = {_e(a, b) for a, b in m}
    if len(set(q)) != len(q):
        return False
    if any(not g.has_edge(a, b) for a, b in zip(q, q[1:])):
        return False
    return all(_e(q[i], q[i + 1]) in ms for i in range(1, len(q) - 1, 2))


def residual_is_perfect(g: Graph, q: Sequence[int], m: Iterable[Edge]) -> bool:
    """``m - E(q)`` is a perfect matching of ``g - V(q)``."""
    qs = set(q)
    qe = {_e(a, b) for a, b in zip(q, q[1:])}
    covered: set[int] = set()
    for a, b in m:
        if _e(a, b) in qe:
            continue
        if a in qs or b in qs or a in covered or b in covered:
            return False
        covered |= {a, b}
    return covered == set(range(g.n)) - qs


# --- ear decompositions -----------------------------------------------------

@dataclass(frozen=True)
class Ear:
    """``vertices`` in order; a cycle's closing edge is implicit."""

    vertices: tuple[int, ...]
    kind: str  # "cycle" | "path"

    def edges(self) -> list[Edge]:
        vs = self.vertices
        es = [_e(a, b) for a, b in zip(vs, vs[1:])]
        if self.kind == "cycle" and len(vs) > 1:
            es.append(_e(vs[-1], vs[0]))
        return es


@dataclass(frozen=True)
class EarDecomposition:
    ears: tuple[Ear, ...]

    def residues(self) -> list[tuple[int, ...]]:
        """New vertices contributed by each ear, in ear order."""
        seen: set[int] = set()
        out = []
        for ear in self.ears:
            new = tuple(v for v in ear.vertices if v not in seen)
            seen.update(ear.vertices)
            out.append(new)
        return out

    def __len__(self) -> int:
        return len(self.ears)


def _odd_cycle_through(g: Graph, a: int, b: int) -> list[int]:
    """An odd cycle of ``g`` through the edge ``ab`` (g factor-critical)."""
    m = perfect_matching(g, g.full_mask & ~(1 << a))
    if m is None:
        raise DomainError("graph is not factor-critical")
    q = alternating_path_to(g, a, m, b)
    return q


def ear_decomposition(g: Graph, root_edge: Edge | None = None) -> EarDecomposition:
    """An ear decomposition of a factor-critical graph with ``root_edge`` in the first ear.

    Each new ear comes from an odd cycle through the contracted vertex of the
    current covered set; contracting a factor-critical subgraph of a
    factor-critical graph keeps it factor-critical, so the cycle exists.
    """
    if g.n < 3 or not is_factor_critical(g):
        raise DomainError("ear decompositions exist only for factor-critical graphs of order >= 3")
    if root_edge is None:
        root_edge = min(g.edges)
    a, b = root_edge
    if not g.has_edge(a, b):
        raise GraphInputError(f"root edge {root_edge} not in graph")
    first = _odd_cycle_through(g, a, b)
    ears = [Ear(tuple(first), "cycle")]
    covered = 0
    for x in first:
        covered |= 1 << x
    while covered != g.full_mask:
        outside = [x for x in range(g.n) if not covered >> x & 1]
        idx = {x: i + 1 for i, x in enumerate(outside)}
        es = []
        for u, v in g.edges:
            cu, cv = covered >> u & 1, covered >> v & 1
            if cu and cv:
                continue
            es.append((0 if cu else idx[u], 0 if cv else idx[v]))
        contracted = Graph.from_edges(len(outside) + 1, set(_e(*e) for e in es))
        y = min(bits(contracted.adj[0]))
        cyc = _odd_cycle_through(contracted, 0, y)
        inner = [outside[i - 1] for i in cyc[1:]]
        ends_first = [x for x in bits(g.adj[inner[0]] & covered)]
        ends_last = [x for x in bits(g.adj[inner[-1]] & covered)]
        p = ends_first[0]
        q = next((x for x in ends_last if x != p), None)
        if q is None:
            ears.append(Ear((p, *inner), "cycle"))
        else:
            ears.append(Ear((p, *inner, q), "path"))
        for x in inner:
            covered |= 1 << x
    return EarDecomposition(tuple(ears))


def validate_ears(g: Graph, d: EarDecomposition) -> tuple[bool, str | None]:
    """Check the ear axioms; returns ``(ok, first violated clause)``."""
    used: set[Edge] = set()
    old: set[int] = set()
    for i, ear in enumerate(d.ears):
        vs = ear.vertices
        if ear.kind not in ("cycle", "path"):
            return False, f"ear {i + 1}: unknown kind {ear.kind!r}"
        if len(set(vs)) != len(vs):
            return False, f"ear {i + 1}: repeated vertex"
        es = ear.edges()
        if any(not (0 <= x < g.n) for x in vs) or any(not g.has_edge(*e) for e in es):
            return False, f"ear {i + 1}: not a subgraph of G"
        if ear.kind == "cycle" and len(vs) < 3:
            return False, f"ear {i + 1}: degenerate cycle"
        if len(es) % 2 == 0 or len(es) < 3:
            return False, "E2"
        if used & set(es):
            return False, f"ear {i + 1}: shares an edge with an earlier ear"
        if i == 0:
            if ear.kind != "cycle":
                return False, "E3"
        else:
            hits = [x for x in vs if x in old]
            if ear.kind == "path":
                if set(hits) != {vs[0], vs[-1]} or len(hits) != 2:
                    return False, "E4"
            elif len(hits) != 1:
                return False, "E4"
        used.update(es)
        old.update(vs)
    if old != set(range(g.n)):
        return False, "E1"
    return True, None


def is_s_large(g: Graph, d: EarDecomposition, index_set: Iterable[int], s: int) -> bool:
    """Whether the (1-based) ear indices select at least ``s`` residue vertices
    inducing a graph with a spanning path."""
    idx = set(index_set)
    if 1 not in idx or any(not 1 <= i <= len(d) for i in idx):
        raise GraphInputError("index set must contain 1 and lie within 1..m")
    if s < 5 or s % 2 == 0:
        raise GraphInputError("s must be odd and at least 5")
    res = d.residues()
    verts = [v for i in sorted(idx) for v in res[i - 1]]
    if len(verts) < s:
        return False
    sub, _ = induced(g, verts)
    return has_hamiltonian_path(sub)


# --- excluded families ------------------------------------------------------

class FamilyTag(str, enum.Enum):
    G0 = "G0"
    G1_MIN_LE1 = "G1_MIN_LE1"
    G1_MIN_EQ2 = "G1_MIN_EQ2"
    G1_MIN_GE3 = "G1_MIN_GE3"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    SMALL_3_5 = "SMALL_3_5"
    ORDER7_NONSPECIAL = "ORDER7_NONSPECIAL"
    HAS_FACTOR = "HAS_FACTOR"


G1_TAGS = (FamilyTag.G1_MIN_LE1, FamilyTag.G1_MIN_EQ2, FamilyTag.G1_MIN_GE3)
CRUSHABLE = (FamilyTag.G0, *G1_TAGS, FamilyTag.G2, FamilyTag.G3, FamilyTag.G4)


@dataclass(frozen=True)
class FamilyClass:
    tag: FamilyTag
    params: tuple[int, ...] = ()
    roles: dict[str, int] = field(default_factory=dict)


def blades(g: Graph) -> list[tuple[int, int, int]]:
    """All ``(hub, a, b)`` with ``ab`` a triangle hanging off ``hub``; ``a < b``."""
    out = []
    for a, b in sorted(g.edges):
        na = g.adj[a] & ~(1 << b)
        nb = g.adj[b] & ~(1 << a)
        if na == nb and popcount(na) == 1:
            out.append((na.bit_length() - 1, a, b))
    return out


def _fits(g: Graph, tag: Family, params: tuple[int, ...], roles: dict[str, int]) -> bool:
    """Whether ``roles`` maps the template range of ``tag`` onto ``g`` exactly."""
    lay, lo, hi = template_range(tag, params)
    if lay.n != g.n or len(roles) != lay.n:
        return False
    to_g = {lay.roles[name]: v for name, v in roles.items()}
    if len(set(to_g.values())) != g.n:
        return False
    for x, y in lo:
        if not g.has_edge(to_g[x], to_g[y]):
            return False
    hi_g = {_e(to_g[x], to_g[y]) for x, y in hi}
    return g.edges <= hi_g


def _hub_blades(bl: list[tuple[int, int, int]]) -> dict[int, list[tuple[int, int]]]:
    out: dict[int, list[tuple[int, int]]] = {}
    for h, a, b in bl:
        out.setdefault(h, []).append((a, b))
    return out


def _pair_roles(i: int, pairs: Sequence[tuple[int, int]]) -> dict[str, int]:
    roles = {}
    for j, (a, b) in enumerate(pairs, 1):
        roles[f"L{i}.{j}.a"] = a
        roles[f"L{i}.{j}.b"] = b
    return roles


def _core(g: Graph, bl: list[tuple[int, int, int]]) -> list[int]:
    stripped = set()
    for _, a, b in bl:
        stripped |= {a, b}
    return [v for v in range(g.n) if v not in stripped]


def recognize_k1_sk2(g: Graph) -> FamilyClass | None:
    c = k1_sk2_center(g)
    if c is None:
        return None
    pairs = sorted(_e(a, b) for a, b in g.edges if c not in (a, b))
    roles = {"center": c, **_pair_roles(1, pairs)}
    return FamilyClass(FamilyTag.G0, (len(pairs),), roles)


def _g1_tag(params: tuple[int, int, int]) -> FamilyTag:
    low = min(params)
    if low <= 1:
        return FamilyTag.G1_MIN_LE1
    if low == 2:
        return FamilyTag.G1_MIN_EQ2
    return FamilyTag.G1_MIN_GE3


def recognize_a1(g: Graph) -> FamilyClass | None:
    """Match A1(s1, s2, s3) with ``s1 >= s2 >= s3`` (any s1 + s2 + s3 >= 1)."""
    bl = blades(g)
    hubs = _hub_blades(bl)
    core = _core(g, bl)
    if len(core) == 1:
        c = core[0]
        pairs = hubs.get(c, [])
        if len(pairs) < 2 or set(hubs) != {c}:
            return None
        (x, y), rest = pairs[0], pairs[1:]
        roles = {"u1": c, "u2": x, "u3": y, **_pair_roles(1, rest)}
        params = (len(rest), 0, 0)
    elif len(core) == 3:
        if not set(hubs) <= set(core):
            return None
        order = sorted(core, key=lambda v: (-len(hubs.get(v, [])), v))
        roles = {f"u{i}": v for i, v in enumerate(order, 1)}
        for i, v in enumerate(order, 1):
            roles.update(_pair_roles(i, hubs.get(v, [])))
        params = tuple(len(hubs.get(v, [])) for v in order)
    else:
        return None
    if sum(params) < 1 or not _fits(g, Family.A1, params, roles):
        return None
    return FamilyClass(_g1_tag(params), params, roles)


def recognize_a2(g: Graph) -> FamilyClass | None:
    bl = blades(g)
    hubs = _hub_blades(bl)
    core = _core(g, bl)
    cmask = 0
    for v in core:
        cmask |= 1 << v
    cand = sorted(itertools.permutations(core, 2),
                  key=lambda pq: (-len(hubs.get(pq[0], [])), pq))
    for u1, u3 in cand:
        if not set(hubs) <= {u1, u3}:
            continue
        comps = component_masks(g, cmask & ~(1 << u1) & ~(1 << u3))
        singles = [c for c in comps if popcount(c) == 1]
        if len(singles) != 1 or any(popcount(c) not in (1, 2) for c in comps):
            continue
        u2 = singles[0].bit_length() - 1
        l2 = []
        ok = True
        for c in comps:
            if popcount(c) != 2:
                continue
            a, b = bits(c)
            if g.has_edge(u1, a) and g.has_edge(u3, b):
                l2.append((a, b))
            elif g.has_edge(u1, b) and g.has_edge(u3, a):
                l2.append((b, a))
            else:
                ok = False
                break
        if not ok:
            continue
        params = (len(hubs.get(u1, [])), len(l2), len(hubs.get(u3, [])))
        s1, s2, s3 = params
        if not (s2 >= 1 and sum(params) >= 3 and ((s1 >= 1 and s3 >= 1) or s2 >= 2)):
            continue
        roles = {"u1": u1, "u2": u2, "u3": u3, **_pair_roles(2, l2),
                 **_pair_roles(1, hubs.get(u1, [])), **_pair_roles(3, hubs.get(u3, []))}
        if _fits(g, Family.A2_PRIME, params, roles):
            return FamilyClass(FamilyTag.G2, params, roles)
    return None


def _single_hub(g: Graph, core_size: int, min_blades: int):
    bl = blades(g)
    hubs = _hub_blades(bl)
    core = _core(g, bl)
    if len(core) != core_size or len(hubs) != 1:
        return None
    (hub, pairs), = hubs.items()
    if hub not in core or len(pairs) < min_blades:
        return None
    return hub, pairs, [v for v in core if v != hub]


def recognize_a3(g: Graph) -> FamilyClass | None:
    found = _single_hub(g, 5, 2)
    if found is None:
        return None
    hub, pairs, others = found
    params = (len(pairs),)
    for u2, u3, a, b in itertools.permutations(others):
        roles = {"u1": hub, "u2": u2, "u3": u3, "L2.1.a": a, "L2.1.b": b, **_pair_roles(1, pairs)}
        if _fits(g, Family.A3_PRIME, params, roles):
            return FamilyClass(FamilyTag.G3, params, roles)
    return None


def recognize_a4(g: Graph) -> FamilyClass | None:
    found = _single_hub(g, 7, 1)
    if found is None:
        return None
    hub, pairs, others = found
    params = (len(pairs),)
    # u2 has exactly the neighbours u1 and u3 in every member of the range
    for u2 in others:
        if popcount(g.adj[u2]) != 2 or not g.has_edge(u2, hub):
            continue
        u3 = next(x for x in bits(g.adj[u2]) if x != hub)
        if u3 not in others:
            continue
        rest = [x for x in others if x not in (u2, u3)]
        for a1, b1, a2, b2 in itertools.permutations(rest):
            if a1 > a2:
                continue
            roles = {"u1": hub, "u2": u2, "u3": u3, "L2.1.a": a1, "L2.1.b": b1,
                     "L2.2.a": a2, "L2.2.b": b2, **_pair_roles(1, pairs)}
            if _fits(g, Family.A4_PRIME, params, roles):
                return FamilyClass(FamilyTag.G4, params, roles)
    return None


def classify_no_factor(g: Graph, k: int) -> FamilyClass:
    """Place a factor-critical graph among the excluded families for k = 3 or 4.

    Orders below 2k+1 cannot carry a P_{2k+1} and are tagged by size; order 7
    under k = 4 is ``ORDER7_NONSPECIAL`` unless it is K1 + 3K2 (tag G0).
    Anything not recognised is ``HAS_FACTOR``.
    """
    if k not in (3, 4):
        raise GraphInputError("k must be 3 or 4")
    if not is_factor_critical(g):
        raise DomainError("classification needs a factor-critical graph")
    n = g.n
    if n < 7:
        return FamilyClass(FamilyTag.SMALL_3_5)
    if k == 3:
        cls = recognize_k1_sk2(g)
        if cls is not None and cls.params[0] >= 3:
            return cls
        return FamilyClass(FamilyTag.HAS_FACTOR)
    if n == 7:
        cls = recognize_k1_sk2(g)
        return cls if cls is not None else FamilyClass(FamilyTag.ORDER7_NONSPECIAL)
    cls = recognize_a1(g)
    if cls is not None and sum(cls.params) >= 3:
        return cls
    for rec in (recognize_a2, recognize_a3, recognize_a4):
        cls = rec(g)
        if cls is not None:
            return cls
    return FamilyClass(FamilyTag.HAS_FACTOR)


# --- crush sets -------------------------------------------------------------

def crush_set(g: Graph, cls: FamilyClass) -> list[int]:
    """The family-specific crush set read off the role map."""
    if cls.tag not in CRUSHABLE or not cls.roles:
        raise DomainError(f"no crush set for {cls.tag.value} without a role map")
    r = cls.roles

    def ends(*groups: int) -> list[int]:
        return [v for name, v in r.items() if name.endswith(".a") and int(name[1]) in groups]

    t = cls.tag
    if t is FamilyTag.G0:
        x = [r["center"], *ends(1)]
    elif t in (FamilyTag.G1_MIN_LE1, FamilyTag.G1_MIN_EQ2):
        x = [r["u1"], r["u2"], *ends(1, 2)]
    elif t is FamilyTag.G1_MIN_GE3:
        x = [r["u1"], r["u2"], r["u3"], *ends(1, 2, 3)]
    elif t is FamilyTag.G2:
        x = [r["u1"], r["u3"], *ends(1, 2, 3)]
    elif t is FamilyTag.G3:
        x = [r["u1"], r["u3"], *ends(1)]
    else:
        x = [r["u1"], r["u3"], r["L2.1.b"], r["L2.2.b"], *ends(1)]
    return sorted(x)


CRUSH_OFFSET = {
    FamilyTag.G0: Fraction(1),
    FamilyTag.G1_MIN_LE1: Fraction(1),
    FamilyTag.G1_MIN_EQ2: Fraction(4, 3),
    FamilyTag.G1_MIN_GE3: Fraction(3),
    FamilyTag.G2: Fraction(1),
    FamilyTag.G3: Fraction(1),
    FamilyTag.G4: Fraction(1),
}
CRUSH_MIN_SIZE = {
    FamilyTag.G0: 4,
    FamilyTag.G1_MIN_LE1: 4,
    FamilyTag.G1_MIN_EQ2: 6,
    FamilyTag.G1_MIN_GE3: 12,
    FamilyTag.G2: 4,
    FamilyTag.G3: 4,
    FamilyTag.G4: 4,
}


def crush_value(g: Graph, x: Iterable[int]) -> Fraction:
    """``c1 + c3 + (2/3) c5`` of ``g - x``."""
    counts = order_counts(g, g.full_mask & ~g.check_vertices(x))
    return counts[1] + counts[3] + Fraction(2, 3) * counts[5]
