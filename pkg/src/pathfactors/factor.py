"""{P2, P7}- and {P2, P9}-factor builders that return either a verified factor
or a verified violating set.

Pipeline (both k): pick a maximum-deficiency barrier S whose complement has
only odd factor-critical components; split those components into T1/T2 by
order and family membership; run the bipartite path-system engine; then
either thread each shape-II path through its components with alternating
paths, or turn the engine's Hall witness into a violating set by adding crush
sets of the excluded-family components it touches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bipartite import AuxiliaryBipartite, AuxPathSystem, HallWitness, construct, t_neighborhood
from .conditions import THM_13, THM_14, ConditionCertificate, ConditionSpec
from .graph import Graph, GraphInputError, SearchBudgetExceeded, bits, component_masks, induced, popcount
from .hypomatchable import (CRUSHABLE, FamilyClass, FamilyTag, alternating_path_to, classify_no_factor,
                            crush_set, k1_sk2_center, long_alternating_path, recognize_k1_sk2)
from .matching import BarrierResult, DomainError, is_factor_critical, perfect_matching, select_barrier

Path = tuple[int, ...]


@dataclass(frozen=True)
class PathSystem:
    paths: tuple[Path, ...]

    @classmethod
    def of(cls, paths: Iterable[Sequence[int]]) -> PathSystem:
        return cls(tuple(sorted(tuple(p) for p in paths)))

    def orders(self) -> list[int]:
        return [len(p) for p in self.paths]


def _check_paths(g: Graph, paths: Iterable[Sequence[int]]) -> str | None:
    seen: set[int] = set()
    for p in paths:
        for v in p:
            if not 0 <= v < g.n:
                return f"vertex {v} out of range"
            if v in seen:
                return f"vertex {v} covered twice"
            seen.add(v)
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                return f"{a}-{b} is not an edge"
    missing = [v for v in range(g.n) if v not in seen]
    if missing:
        return f"vertex {missing[0]} uncovered"
    return None


def verify_factor(g: Graph, f: PathSystem, k: int) -> tuple[bool, str | None]:
    """Whether ``f`` is a spanning set of paths of orders 2 and ``2k+1``."""
    why = _check_paths(g, f.paths)
    if why:
        return False, why
    for p in f.paths:
        if len(p) not in (2, 2 * k + 1):
            return False, f"order {len(p)} not allowed"
    return True, None


def normalize_factor(g: Graph, f: PathSystem, k: int) -> PathSystem:
    """Cut a path-factor without odd orders in 3..2k-1 into a {P2, P_{2k+1}}-factor."""
    why = _check_paths(g, f.paths)
    if why:
        raise GraphInputError(f"not a path-factor: {why}")
    top = 2 * k + 1
    out: list[Path] = []
    for p in f.paths:
        n = len(p)
        if n < 2 or (n % 2 and n < top):
            raise DomainError(f"path of order {n} cannot be split into orders 2 and {top}")
        start = 0
        if n % 2:
            out.append(tuple(p[:top]))
            start = top
        out.extend(tuple(p[i:i + 2]) for i in range(start, n, 2))
    return PathSystem.of(out)


# --- brute-force oracle -----------------------------------------------------

def brute_force_factor(g: Graph, k: int, alive: int | None = None) -> PathSystem | None:
    """Some {P2, P_{2k+1}}-factor of ``g[alive]`` or ``None``; exhaustive.

    Covers the lowest uncovered vertex by an edge or by a path of order
    ``2k+1`` through it; prunes when a component of the uncovered part has odd
    order below ``2k+1``; memoises failed masks.
    """
    if k < 1:
        raise GraphInputError("k must be positive")
    top = 2 * k + 1
    adj = g.adj
    failed: set[int] = set()

    def arms(v: int, mask: int, length: int, used: int):
        """Simple paths from ``v`` with ``length`` vertices inside ``mask`` avoiding ``used``."""
        if length == 1:
            yield (v,), 1 << v
            return
        stack = [((v,), 1 << v)]
        while stack:
            path, pm = stack.pop()
            if len(path) == length:
                yield path, pm
                continue
            for w in bits(adj[path[-1]] & mask & ~pm & ~used):
                stack.append((path + (w,), pm | 1 << w))

    def long_paths(v: int, mask: int):
        for a in range(top, (top + 1) // 2 - 1, -1):
            b = top + 1 - a
            for arm_a, ma in arms(v, mask, a, 0):
                if b == 1:
                    yield arm_a, ma
                    continue
                for arm_b, mb in arms(v, mask, b, ma & ~(1 << v)):
                    if a == b and arm_a[1] > arm_b[1]:
                        continue
                    yield tuple(reversed(arm_a)) + arm_b[1:], ma | mb

    def solve(mask: int) -> list[Path] | None:
        if not mask:
            return []
        if mask in failed:
            return None
        for c in component_masks(g, mask):
            o = popcount(c)
            if o % 2 and o < top:
                failed.add(mask)
                return None
        v = (mask & -mask).bit_length() - 1
        for u in bits(adj[v] & mask):
            rest = solve(mask & ~(1 << v) & ~(1 << u))
            if rest is not None:
                return [(v, u)] + rest
        for path, pm in long_paths(v, mask):
            rest = solve(mask & ~pm)
            if rest is not None:
                return [path] + rest
        failed.add(mask)
        return None

    res = solve(g.full_mask if alive is None else alive)
    return None if res is None else PathSystem.of(res)


# --- builders ---------------------------------------------------------------

@dataclass
class BuildTrace:
    k: int
    barrier: BarrierResult | None = None
    t1: list[int] = field(default_factory=list)
    t2: list[int] = field(default_factory=list)
    forbidden: list[tuple[int, int]] = field(default_factory=list)
    aux_result: AuxPathSystem | HallWitness | None = None
    steps: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"k": self.k, "steps": list(self.steps)}
        if self.barrier is not None:
            out["barrier"] = {"s": list(self.barrier.s),
                              "components": [list(c) for c in self.barrier.components],
                              "deficiency": self.barrier.deficiency}
        out["t1"] = self.t1
        out["t2"] = self.t2
        out["forbidden"] = [list(e) for e in self.forbidden]
        r = self.aux_result
        if isinstance(r, AuxPathSystem):
            out["aux_paths"] = [[f"{side}{i}" for side, i in p.nodes] for p in r.paths]
        elif isinstance(r, HallWitness):
            out["hall_witness"] = {"side": r.side, "nodes": list(r.nodes),
                                   "neighborhood_size": r.neighborhood_size, "bound": str(r.bound)}
        return out


@dataclass(frozen=True)
class BuildOutcome:
    factor: PathSystem | None
    certificate: ConditionCertificate | None
    trace: BuildTrace

    def __post_init__(self) -> None:
        assert (self.factor is None) != (self.certificate is None)


class UnresolvedComponent(RuntimeError):
    """A component expected to carry a factor resisted every construction."""


def _sub_matching(sub_m: Iterable[tuple[int, int]], old: list[int], skip: set[tuple[int, int]] = frozenset()
                  ) -> list[Path]:
    out = []
    for a, b in sub_m:
        e = (a, b) if a < b else (b, a)
        if e in skip:
            continue
        out.append((old[a], old[b]))
    return out


def _path_edges(q: Sequence[int]) -> set[tuple[int, int]]:
    return {(a, b) if a < b else (b, a) for a, b in zip(q, q[1:])}


def component_factor(g: Graph, comp: Iterable[int], k: int, oracle_limit: int = 17) -> list[Path]:
    """A {P2, P_{2k+1}}-factor of ``g[comp]`` (path orders 2 and odd >= 2k+1).

    Tries, in order: a perfect matching; one alternating path of order at
    least ``2k+1`` with the rest matched; one path of order exactly ``2k+1``
    found by search whose complement has a perfect matching; the exhaustive
    oracle (small components only).
    """
    sub, old = induced(g, comp)
    top = 2 * k + 1
    pm = perfect_matching(sub)
    if pm is not None:
        return _sub_matching(pm, old)
    if sub.n % 2 == 0 or sub.n < top:
        f = brute_force_factor(sub, k) if sub.n <= oracle_limit else None
        if f is None:
            raise UnresolvedComponent(f"no factor found for a component of order {sub.n}")
        return [tuple(old[x] for x in p) for p in f.paths]
    full = sub.full_mask
    near: dict[int, dict[int, int]] = {}
    for w in range(sub.n):
        m = perfect_matching(sub, full & ~(1 << w))
        if m is None:
            break
        mate = {}
        for a, b in m:
            mate[a] = b
            mate[b] = a
        near[w] = mate
    else:
        # symmetric differences of near-perfect matchings give alternating paths
        for v in range(sub.n):
            for w in range(sub.n):
                if w == v:
                    continue
                q = [v]
                cur, use_w = v, True
                while cur != w:
                    cur = near[w][cur] if use_w else near[v][cur]
                    q.append(cur)
                    use_w = not use_w
                if len(q) >= top:
                    qs = set(q)
                    rest = [(a, b) for a, b in near[v].items() if a < b and a not in qs and b not in qs]
                    return [tuple(old[x] for x in q)] + [(old[a], old[b]) for a, b in rest]
    found = _single_long_path(sub, top)
    if found is not None:
        q, m = found
        return [tuple(old[x] for x in q)] + _sub_matching(m, old)
    if sub.n <= oracle_limit:
        f = brute_force_factor(sub, k)
        if f is not None:
            return [tuple(old[x] for x in p) for p in f.paths]
    raise UnresolvedComponent(f"no factor found for a component of order {sub.n}")


def _single_long_path(sub: Graph, top: int, budget: int = 200_000):
    """Search a path of order ``top`` whose complement has a perfect matching."""
    nodes = 0
    full = sub.full_mask
    for s in range(sub.n):
        stack = [((s,), 1 << s)]
        while stack:
            path, pm = stack.pop()
            nodes += 1
            if nodes > budget:
                return None
            if len(path) == top:
                if path[0] > path[-1]:
                    continue
                m = perfect_matching(sub, full & ~pm)
                if m is not None:
                    return path, m
                continue
            for w in bits(sub.adj[path[-1]] & ~pm):
                stack.append((path + (w,), pm | 1 << w))
    return None


@dataclass
class _Comp:
    idx: int
    mask: int
    size: int
    cls: FamilyClass | None = None


def _classify_components(g: Graph, barrier: BarrierResult, k: int) -> list[_Comp]:
    comps = []
    for j, c in enumerate(barrier.components):
        mask = g.check_vertices(c)
        item = _Comp(j, mask, len(c))
        if item.size >= 7:
            sub, _ = induced(g, c)
            item.cls = classify_no_factor(sub, k)
        comps.append(item)
    return comps


def _is_t1(c: _Comp, k: int) -> bool:
    return c.size == 1 if k == 3 else c.size <= 5


def _is_t2(c: _Comp, k: int) -> bool:
    if k == 3:
        if c.size in (3, 5):
            return True
        return c.size >= 7 and c.cls.tag is FamilyTag.G0
    if c.size == 7:
        return True
    return c.size >= 9 and c.cls.tag in CRUSHABLE


def _nbr_in(g: Graph, u: int, mask: int) -> list[int]:
    return list(bits(g.adj[u] & mask))


def _crush_in_g(g: Graph, comp: _Comp) -> list[int]:
    sub, old = induced(g, bits(comp.mask))
    cls = comp.cls
    if cls is None or cls.tag not in CRUSHABLE:
        cls = recognize_k1_sk2(sub)
    if cls is None:
        raise DomainError("component is not in a crushable family")
    return [old[v] for v in crush_set(sub, cls)]


def _build(g: Graph, k: int) -> BuildOutcome:
    spec = THM_13 if k == 3 else THM_14
    trace = BuildTrace(k)
    if g.n == 0:
        return BuildOutcome(PathSystem(()), None, trace)
    barrier = select_barrier(g)
    trace.barrier = barrier
    comps = _classify_components(g, barrier, k)
    t1 = [c.idx for c in comps if _is_t1(c, k)]
    t2 = [c.idx for c in comps if _is_t2(c, k)]
    trace.t1, trace.t2 = t1, t2
    adjacency = set()
    forbidden = set()
    centers: dict[int, int] = {}
    if k == 4:
        for c in comps:
            if c.idx in t2 and c.size >= 7:
                sub, old = induced(g, bits(c.mask))
                z = k1_sk2_center(sub)
                if z is not None:
                    centers[c.idx] = old[z]
    for u in barrier.s:
        for c in comps:
            hit = g.adj[u] & c.mask
            if hit:
                adjacency.add((u, c.idx))
                if c.idx in centers and hit == 1 << centers[c.idx]:
                    forbidden.add((u, c.idx))
    trace.forbidden = sorted(forbidden)
    aux = AuxiliaryBipartite.build(barrier.s, range(len(comps)), adjacency, forbidden, t1, t2)
    res = construct(aux)
    trace.aux_result = res
    if isinstance(res, HallWitness):
        if res.side != "T_SIDE":
            raise AssertionError("internal error: barrier violates the S-side Hall condition")
        direct = _direct_factor(g, k)
        if direct is not None:
            trace.steps.append("condition fails but a factor was found directly")
            factor = normalize_factor(g, PathSystem.of(direct), k)
            assert verify_factor(g, factor, k)[0]
            return BuildOutcome(factor, None, trace)
        x0 = _lift(g, k, aux, res, comps, trace)
        cert = ConditionCertificate.evaluate(g, spec, x0)
        assert cert.violated and cert.recheck(g), "internal error: lifted set does not violate the condition"
        return BuildOutcome(None, cert, trace)
    paths = _assemble(g, k, res, comps, centers, trace)
    factor = normalize_factor(g, PathSystem.of(paths), k)
    ok, why = verify_factor(g, factor, k)
    assert ok, f"internal error: assembled factor invalid: {why}"
    return BuildOutcome(factor, None, trace)


def _direct_factor(g: Graph, k: int, oracle_limit: int = 14) -> list[Path] | None:
    """Factor each component of ``g`` on its own; ``None`` if any resists."""
    out: list[Path] = []
    for cm in component_masks(g, g.full_mask):
        try:
            out.extend(component_factor(g, bits(cm), k, oracle_limit))
        except UnresolvedComponent:
            return None
    return out


def _lift(g: Graph, k: int, aux: AuxiliaryBipartite, w: HallWitness, comps: list[_Comp],
          trace: BuildTrace) -> list[int]:
    xp = sorted(t_neighborhood(aux, w.nodes))
    trace.steps.append(f"hall witness Y={list(w.nodes)} gives X'={xp}")
    x0 = set(xp)
    if k == 3:
        xmask = g.check_vertices(xp)
        c1 = 0
        cprime = 0
        extra = []
        for cm in component_masks(g, g.full_mask & ~xmask):
            size = popcount(cm)
            if size == 1:
                c1 += 1
                continue
            if size % 2 == 0 or not is_factor_critical(g, cm):
                continue
            if size in (3, 5):
                cprime += 1
                continue
            sub, old = induced(g, bits(cm))
            cls = classify_no_factor(sub, 3)
            if cls.tag is FamilyTag.G0:
                cprime += 1
                extra.append([old[v] for v in crush_set(sub, cls)])
        assert c1 + Fraction(cprime, 2) > len(xp), "internal error: X' does not violate c1 + c'/2 <= |X'|"
        for xs in extra:
            x0.update(xs)
            trace.steps.append(f"crush set {sorted(xs)}")
        return sorted(x0)
    for j in w.nodes:
        c = comps[j]
        if j not in aux.t2:
            continue
        if c.size == 7 and c.cls.tag is not FamilyTag.G0:
            continue
        xs = _crush_in_g(g, c)
        x0.update(xs)
        trace.steps.append(f"crush set {sorted(xs)} of component {j}")
    return sorted(x0)


def _assemble(g: Graph, k: int, system: AuxPathSystem, comps: list[_Comp], centers: dict[int, int],
              trace: BuildTrace) -> list[Path]:
    paths: list[Path] = []
    used: set[int] = set()
    for ap in system.paths:
        nodes = list(ap.nodes)
        if ap.shape == "I":
            u = next(x[1] for x in nodes if x[0] == "S")
            c = comps[next(x[1] for x in nodes if x[0] == "T")]
            used.add(c.idx)
            v = _nbr_in(g, u, c.mask)[0]
            sub, old = induced(g, bits(c.mask))
            m = perfect_matching(sub, sub.full_mask & ~(1 << old.index(v)))
            paths.append((u, v))
            paths.extend(_sub_matching(m, old))
            trace.steps.append(f"shape I: {u} absorbs component {c.idx} at {v}")
            continue
        us = [x[1] for x in nodes if x[0] == "S"]
        ds = [comps[x[1]] for x in nodes if x[0] == "T"]
        used.update(d.idx for d in ds)
        if k == 3:
            paths.extend(_thread_p7(g, us, ds))
        else:
            paths.extend(_thread_p9(g, us, ds, centers))
        trace.steps.append(f"shape II through components {[d.idx for d in ds]} via {us}")
    for c in comps:
        if c.idx in used:
            continue
        paths.extend(component_factor(g, bits(c.mask), k))
        trace.steps.append(f"component {c.idx} factored on its own")
    return paths


def _end_piece(g: Graph, d: _Comp, v: int) -> tuple[list[int], list[Path]]:
    """Path ``v' u' v`` inside ``d`` ending at ``v`` plus the leftover matching."""
    sub, old = induced(g, bits(d.mask))
    lv = old.index(v)
    m = perfect_matching(sub, sub.full_mask & ~(1 << lv))
    mate = {}
    for a, b in m:
        mate[a] = b
        mate[b] = a
    lu = min(bits(sub.adj[lv]))
    lw = mate[lu]
    skip = {(min(lu, lw), max(lu, lw))}
    return [old[lw], old[lu], v], _sub_matching(m, old, skip)


def _thread_p7(g: Graph, us: list[int], ds: list[_Comp]) -> list[Path]:
    l = len(us)
    vs = [_nbr_in(g, us[i], ds[i].mask)[0] for i in range(l)]
    v_last = _nbr_in(g, us[-1], ds[-1].mask)[0]
    head, m1 = _end_piece(g, ds[0], vs[0])
    tail, m2 = _end_piece(g, ds[-1], v_last)
    p = head[:]
    for i in range(l):
        if i > 0:
            p.append(vs[i])
        p.append(us[i])
    p.extend(reversed(tail))
    return [tuple(p)] + m1 + m2


def _alt(g: Graph, d: _Comp, start: int, end: int | None) -> tuple[list[int], list[Path]]:
    """Alternating path in ``d`` from ``start`` (to ``end``, or long if ``None``) and the leftover matching."""
    sub, old = induced(g, bits(d.mask))
    ls = old.index(start)
    m = perfect_matching(sub, sub.full_mask & ~(1 << ls))
    if end is None:
        q = long_alternating_path(sub, ls, m)
    else:
        q = alternating_path_to(sub, ls, m, old.index(end))
    return [old[x] for x in q], _sub_matching(m, old, _path_edges(q))


def _end_vertex(g: Graph, u: int, d: _Comp, centers: dict[int, int]) -> int:
    cand = [v for v in _nbr_in(g, u, d.mask) if v != centers.get(d.idx)]
    return cand[0]


def _thread_p9(g: Graph, us: list[int], ds: list[_Comp], centers: dict[int, int]) -> list[Path]:
    l = len(us)
    out: list[Path] = []
    v1 = _end_vertex(g, us[0], ds[0], centers)
    q1, m1 = _alt(g, ds[0], v1, None)
    p = list(reversed(q1))
    out.extend(m1)
    for i in range(1, l):
        wi = _nbr_in(g, us[i - 1], ds[i].mask)[0]
        vi = _nbr_in(g, us[i], ds[i].mask)[0]
        p.append(us[i - 1])
        qi, mi = _alt(g, ds[i], wi, vi)
        p.extend(qi)
        out.extend(mi)
    p.append(us[-1])
    wl = _end_vertex(g, us[-1], ds[-1], centers)
    ql, ml = _alt(g, ds[-1], wl, None)
    p.extend(ql)
    out.extend(ml)
    assert len(p) >= 11
    return [tuple(p)] + out


def build_p2p7(g: Graph) -> BuildOutcome:
    """A {P2, P7}-factor, or a set violating ``c1 + c3/3 + c5/3 <= 2|X|/3``."""
    return _build(g, 3)


def build_p2p9(g: Graph) -> BuildOutcome:
    """A {P2, P9}-factor, or a set violating ``c1 + c3 + 2c5/3 + c7/3 <= 2|X|/3``."""
    return _build(g, 4)


def build_factor(g: Graph, k: int) -> BuildOutcome:
    if k == 3:
        return build_p2p7(g)
    if k == 4:
        return build_p2p9(g)
    raise GraphInputError("k must be 3 or 4")


__all__ = [
    "PathSystem", "BuildOutcome", "BuildTrace", "ConditionSpec", "UnresolvedComponent",
    "verify_factor", "normalize_factor", "brute_force_factor", "component_factor",
    "build_p2p7", "build_p2p9", "build_factor", "SearchBudgetExceeded",
]
