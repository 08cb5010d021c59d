"""Component-counting conditions ``sum_i w_i c_i(G - X) <= a|X| + b``.

Exhaustive scans enumerate X by increasing size (then lexicographically), so
the first violation found is a smallest one. All comparisons are done in
integers after clearing denominators.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .graph import (ComponentCensus, Graph, GraphInputError, SearchBudgetExceeded, bits,
                    census, component_masks, popcount)

EXHAUSTIVE_BUDGET = 22


@dataclass(frozen=True)
class ConditionSpec:
    weights: dict[int, Fraction]
    slope: Fraction
    offset: Fraction = Fraction(0)
    name: str = "custom"

    def __post_init__(self) -> None:
        ws = {int(i): Fraction(w) for i, w in self.weights.items()}
        if any(i < 1 or i % 2 == 0 for i in ws):
            raise GraphInputError("weights must be supported on odd orders")
        if any(w < 0 for w in ws.values()):
            raise GraphInputError("weights must be non-negative")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def lhs(self, c: ComponentCensus) -> Fraction:
        return c.weighted(self.weights)

    def rhs(self, size: int) -> Fraction:
        return self.slope * size + self.offset

    def scaled(self) -> tuple[dict[int, int], int, int]:
        """Integer weights, slope, offset after multiplying by a common denominator."""
        den = math.lcm(*(q.denominator for q in (*self.weights.values(), self.slope, self.offset)))
        return ({i: int(w * den) for i, w in self.weights.items()},
                int(self.slope * den), int(self.offset * den))


def _f(p: int, q: int = 1) -> Fraction:
    return Fraction(p, q)


THM_A = ConditionSpec({1: _f(1)}, _f(2), _f(0), "thmA")
THM_B = ConditionSpec({1: _f(1), 3: _f(2, 3)}, _f(4, 3), _f(1, 3), "thmB")
THM_13 = ConditionSpec({1: _f(1), 3: _f(1, 3), 5: _f(1, 3)}, _f(2, 3), _f(0), "thm13")
THM_14 = ConditionSpec({1: _f(1), 3: _f(1), 5: _f(2, 3), 7: _f(1, 3)}, _f(2, 3), _f(0), "thm14")
LEMMA_61 = ConditionSpec({1: _f(1), 3: _f(1), 5: _f(1), 7: _f(1)}, _f(2, 3), _f(1, 3), "lemma61")


def conjecture_spec(k: int) -> ConditionSpec:
    """Unit weights on odd orders below ``2k+1``, slope ``(4k+6)/(8k+3)``, no offset."""
    if k < 1:
        raise GraphInputError("k must be positive")
    return ConditionSpec({2 * i + 1: _f(1) for i in range(k)}, _f(4 * k + 6, 8 * k + 3), _f(0),
                         f"conjecture:{k}")


def necessary_spec(k: int) -> ConditionSpec:
    """``sum_{0<=i<k} (k - i) c_{2i+1} <= (k + 1)|X|``; violated means no {P2, P_{2k+1}}-factor."""
    if k < 1:
        raise GraphInputError("k must be positive")
    return ConditionSpec({2 * i + 1: _f(k - i) for i in range(k)}, _f(k + 1), _f(0), f"necessary:{k}")


PRESETS: dict[str, ConditionSpec] = {s.name: s for s in (THM_A, THM_B, THM_13, THM_14, LEMMA_61)}


def preset(name: str) -> ConditionSpec:
    if name.startswith("conjecture:"):
        return conjecture_spec(int(name.split(":", 1)[1]))
    if name.startswith("necessary:"):
        return necessary_spec(int(name.split(":", 1)[1]))
    try:
        return PRESETS[name]
    except KeyError:
        raise GraphInputError(f"unknown preset {name!r}") from None


@dataclass(frozen=True)
class ConditionCertificate:
    """A set ``x`` with ``lhs = sum w_i c_i(G - x) > rhs = slope |x| + offset``."""

    x: tuple[int, ...]
    weights: dict[int, Fraction]
    slope: Fraction
    offset: Fraction
    lhs: Fraction
    rhs: Fraction

    @classmethod
    def evaluate(cls, g: Graph, spec: ConditionSpec, x: Iterable[int]) -> ConditionCertificate:
        xs = tuple(sorted(set(x)))
        c = census(g, xs)
        return cls(xs, dict(spec.weights), spec.slope, spec.offset, spec.lhs(c), spec.rhs(len(xs)))

    @property
    def violated(self) -> bool:
        return self.lhs > self.rhs

    def recheck(self, g: Graph) -> bool:
        """Recount components from scratch and confirm the violation."""
        keep = [v for v in range(g.n) if v not in set(self.x)]
        seen: set[int] = set()
        orders: dict[int, int] = {}
        nbrs = {v: set() for v in keep}
        ks = set(keep)
        for u, v in g.edges:
            if u in ks and v in ks:
                nbrs[u].add(v)
                nbrs[v].add(u)
        for v in keep:
            if v in seen:
                continue
            stack, size = [v], 0
            seen.add(v)
            while stack:
                y = stack.pop()
                size += 1
                for z in nbrs[y]:
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
            orders[size] = orders.get(size, 0) + 1
        lhs = sum((Fraction(w) * orders.get(i, 0) for i, w in self.weights.items()), Fraction(0))
        rhs = self.slope * len(self.x) + self.offset
        return lhs == self.lhs and rhs == self.rhs and lhs > rhs


class Verdict(str, enum.Enum):
    HOLDS_EXHAUSTIVE = "HOLDS_EXHAUSTIVE"
    VIOLATED = "VIOLATED"
    HOLDS_SAMPLED = "HOLDS_SAMPLED"


@dataclass(frozen=True)
class ConditionReport:
    verdict: Verdict
    witness: ConditionCertificate | None
    subsets_checked: int
    tightest: ConditionCertificate | None = None  # largest lhs - rhs seen (reported, not judged)

    @property
    def holds(self) -> bool:
        return self.verdict is not Verdict.VIOLATED


class _Scorer:
    """Integer-scaled evaluation of several specs on one census."""

    def __init__(self, g: Graph, specs: list[ConditionSpec]) -> None:
        self.g = g
        self.specs = specs
        self.scaled = [s.scaled() for s in specs]

    def gaps(self, x: int) -> list[int]:
        """Scaled ``lhs - rhs`` per spec (positive means violated)."""
        counts: dict[int, int] = {}
        for c in component_masks(self.g, self.g.full_mask & ~x):
            o = popcount(c)
            counts[o] = counts.get(o, 0) + 1
        k = popcount(x)
        out = []
        for ws, a, b in self.scaled:
            lhs = 0
            for i, w in ws.items():
                lhs += w * counts.get(i, 0)
            out.append(lhs - a * k - b)
        return out


def _masks_by_size(n: int) -> Iterator[int]:
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            m = 0
            for v in combo:
                m |= 1 << v
            yield m


def check_conditions_exhaustive(g: Graph, specs: list[ConditionSpec],
                                budget: int = EXHAUSTIVE_BUDGET) -> list[ConditionReport]:
    """Exhaustive scan of several conditions sharing one census per subset."""
    if g.n > budget:
        raise SearchBudgetExceeded(f"exhaustive check limited to n <= {budget} (got {g.n})")
    sc = _Scorer(g, specs)
    open_ = set(range(len(specs)))
    witness: dict[int, int] = {}
    checked = [0] * len(specs)
    best: list[tuple[int, int] | None] = [None] * len(specs)
    for x in _masks_by_size(g.n):
        gaps = sc.gaps(x)
        for i in list(open_):
            checked[i] += 1
            gp = gaps[i]
            if best[i] is None or gp > best[i][0]:
                best[i] = (gp, x)
            if gp > 0:
                witness[i] = x
                open_.discard(i)
        if not open_:
            break
    out = []
    for i, spec in enumerate(specs):
        tight = ConditionCertificate.evaluate(g, spec, bits(best[i][1])) if best[i] else None
        if i in witness:
            cert = ConditionCertificate.evaluate(g, spec, bits(witness[i]))
            assert cert.violated
            out.append(ConditionReport(Verdict.VIOLATED, cert, checked[i], tight))
        else:
            out.append(ConditionReport(Verdict.HOLDS_EXHAUSTIVE, None, checked[i], tight))
    return out


def structured_candidates(g: Graph) -> list[int]:
    """Vertex sets that tend to be tight: barriers, neighbourhoods, crush-set unions.

    For each base set B (empty set, the universal vertices, the barrier, each
    closed and open neighbourhood), every recognised crushable component of
    ``G - B`` contributes its crush set; unions over subsets of those
    components are added (all subsets when there are at most 10).
    """
    from .hypomatchable import CRUSHABLE, classify_no_factor, crush_set
    from .matching import is_factor_critical, select_barrier
    from .graph import induced

    full = g.full_mask
    universal = 0
    for v in range(g.n):
        if g.adj[v] | (1 << v) == full:
            universal |= 1 << v
    bases = {0, full, universal, g.check_vertices(select_barrier(g).s)}
    for v in range(g.n):
        bases.add(g.adj[v])
        bases.add(g.adj[v] | (1 << v))
    out: set[int] = set(bases)
    for base in sorted(bases):
        crushes = []
        for comp in component_masks(g, full & ~base):
            if popcount(comp) < 7 or not is_factor_critical(g, comp):
                continue
            sub, old = induced(g, bits(comp))
            for k in (3, 4):
                cls = classify_no_factor(sub, k)
                if cls.tag in CRUSHABLE:
                    crushes.append(g.check_vertices(old[v] for v in crush_set(sub, cls)))
                    break
        if not crushes:
            continue
        if len(crushes) <= 10:
            for r in range(1, len(crushes) + 1):
                for combo in itertools.combinations(crushes, r):
                    m = base
                    for c in combo:
                        m |= c
                    out.add(m)
        else:
            m = base
            for c in crushes:
                m |= c
                out.add(m)
    return sorted(out, key=lambda m: (popcount(m), m))


def check_conditions_sampled(g: Graph, specs: list[ConditionSpec], trials: int, seed: int,
                             extra: Iterable[int] = ()) -> list[ConditionReport]:
    """Random subsets (each vertex with probability 1/2) plus structured candidates.

    Bit-reproducible for a fixed seed. A clean run is evidence, not proof.
    """
    sc = _Scorer(g, specs)
    rng = random.Random(seed)
    cands = structured_candidates(g) + list(extra)
    n = g.n
    witness: dict[int, int] = {}
    best: list[tuple[int, int] | None] = [None] * len(specs)
    checked = 0

    def feed(x: int) -> None:
        gaps = sc.gaps(x)
        for i, gp in enumerate(gaps):
            if best[i] is None or gp > best[i][0]:
                best[i] = (gp, x)
            if gp > 0 and (i not in witness or (popcount(x), x) < (popcount(witness[i]), witness[i])):
                witness[i] = x

    for x in cands:
        feed(x)
        checked += 1
    for _ in range(trials):
        feed(rng.getrandbits(n) if n else 0)
        checked += 1
    out = []
    for i, spec in enumerate(specs):
        tight = ConditionCertificate.evaluate(g, spec, bits(best[i][1])) if best[i] else None
        if i in witness:
            cert = ConditionCertificate.evaluate(g, spec, bits(witness[i]))
            out.append(ConditionReport(Verdict.VIOLATED, cert, checked, tight))
        else:
            out.append(ConditionReport(Verdict.HOLDS_SAMPLED, None, checked, tight))
    return out


@dataclass(frozen=True)
class Mode:
    """``exhaustive`` or ``sampled`` with a trial count and seed."""

    kind: str = "exhaustive"
    trials: int = 0
    seed: int = 0
    budget: int = EXHAUSTIVE_BUDGET

    @classmethod
    def parse(cls, text: str) -> Mode:
        if text == "exhaustive":
            return cls()
        parts = text.split(":")
        if len(parts) == 3 and parts[0] == "sampled":
            return cls("sampled", int(parts[1]), int(parts[2]))
        raise GraphInputError(f"bad mode {text!r}; use exhaustive or sampled:N:seed")


EXHAUSTIVE = Mode()


def check_condition(g: Graph, spec: ConditionSpec, mode: Mode = EXHAUSTIVE) -> ConditionReport:
    if mode.kind == "exhaustive":
        return check_conditions_exhaustive(g, [spec], mode.budget)[0]
    return check_conditions_sampled(g, [spec], mode.trials, mode.seed)[0]


def check_necessary(g: Graph, k: int, mode: Mode = EXHAUSTIVE) -> ConditionReport:
    return check_condition(g, necessary_spec(k), mode)


@dataclass
class CrossCheckReport:
    """Links of the chain sufficient => builder factor => oracle factor => necessary."""

    k: int
    sufficient: Verdict
    builder_factor: bool
    oracle_factor: bool
    necessary: Verdict
    broken: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.broken


def cross_check(g: Graph, k: int, budget: int = 14) -> CrossCheckReport:
    """Run the implication chain on ``g`` and list any broken link."""
    from .factor import brute_force_factor, build_p2p7, build_p2p9

    if k not in (3, 4):
        raise GraphInputError("k must be 3 or 4")
    if g.n > budget:
        raise SearchBudgetExceeded(f"cross_check limited to n <= {budget}")
    spec = THM_13 if k == 3 else THM_14
    suff, nec = check_conditions_exhaustive(g, [spec, necessary_spec(k)])
    out = (build_p2p7 if k == 3 else build_p2p9)(g)
    oracle = brute_force_factor(g, k) is not None
    rep = CrossCheckReport(k, suff.verdict, out.factor is not None, oracle, nec.verdict)
    if suff.verdict is Verdict.HOLDS_EXHAUSTIVE and not rep.builder_factor:
        rep.broken.append("sufficient condition holds but builder returned a certificate")
    if rep.builder_factor and not oracle:
        rep.broken.append("builder factor but oracle found none")
    if oracle and nec.verdict is Verdict.VIOLATED:
        rep.broken.append("oracle factor but necessary condition violated")
    if out.certificate is not None and not out.certificate.recheck(g):
        rep.broken.append("certificate does not recheck")
    return rep


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def custom_spec(weights: str, slope: str, offset: str = "0") -> ConditionSpec:
    """``weights`` like ``"1:1,3:1/3,5:1/3"``."""
    ws = {}
    for item in weights.split(","):
        if not item.strip():
            continue
        i, w = item.split(":")
        ws[int(i)] = Fraction(w)
    return ConditionSpec(ws, Fraction(slope), Fraction(offset))

