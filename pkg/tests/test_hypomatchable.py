from fractions import Fraction

import pytest

from pathfactors.generators import Family, FamilySpec, complete, cycle, generate, k1_sk2, random_factor_critical
from pathfactors.graph import GraphInputError, census, has_hamiltonian_path
from pathfactors.hypomatchable import (CRUSH_OFFSET, Ear, EarDecomposition, FamilyClass, FamilyTag,
                                       alternating_path_to, classify_no_factor, crush_set, crush_value,
                                       ear_decomposition, is_alternating, is_s_large, k1_sk2_center,
                                       long_alternating_path, residual_is_perfect, validate_ears)
from pathfactors.matching import DomainError, perfect_matching

from oracles import has_factor


def near_pm(g, v):
    return perfect_matching(g, g.full_mask & ~(1 << v))


# --- ears -------------------------------------------------------------------

def test_ears_c5_single_cycle():
    d = ear_decomposition(cycle(5))
    assert len(d) == 1 and d.ears[0].kind == "cycle" and sorted(d.ears[0].vertices) == list(range(5))


def test_ears_bowtie_two_triangles():
    g = k1_sk2(2).graph
    d = ear_decomposition(g)
    assert [len(e.vertices) for e in d.ears] == [3, 3]
    assert all(e.kind == "cycle" and 0 in e.vertices for e in d.ears)
    assert validate_ears(g, d) == (True, None)


def test_ears_root_edge_in_first_ear():
    d = ear_decomposition(complete(3), root_edge=(0, 1))
    assert len(d) == 1 and (0, 1) in d.ears[0].edges()


def test_ears_reject_non_factor_critical():
    with pytest.raises(DomainError):
        ear_decomposition(complete(4))


def test_validate_rejects_even_ear():
    # the first four edges of C5: even edge count
    d = EarDecomposition((Ear((0, 1, 2, 3, 4), "path"),))
    assert validate_ears(cycle(5), d) == (False, "E2")
    d = EarDecomposition((Ear((0, 1, 2, 3), "cycle"),))
    ok, clause = validate_ears(cycle(5), d)
    assert not ok and "not a subgraph" in clause


def test_validate_c5():
    assert validate_ears(cycle(5), EarDecomposition((Ear(tuple(range(5)), "cycle"),)))[0]


@pytest.mark.parametrize("seed", range(25))
def test_ears_every_root_edge(seed):
    g = random_factor_critical(9, seed, max_ear=None if seed % 2 else 2)
    for e in sorted(g.edges):
        d = ear_decomposition(g, root_edge=e)
        assert validate_ears(g, d) == (True, None)
        assert e in d.ears[0].edges()
        res = d.residues()
        assert all(len(r) % 2 == 0 for r in res[1:])


def test_s_large_examples():
    assert is_s_large(cycle(7), ear_decomposition(cycle(7)), {1}, 7)
    assert not is_s_large(cycle(5), ear_decomposition(cycle(5)), {1}, 7)
    g = k1_sk2(3).graph
    d = ear_decomposition(g)
    assert len(d) == 3
    assert not is_s_large(g, d, {1, 2, 3}, 7)
    with pytest.raises(GraphInputError):
        is_s_large(g, d, {2}, 7)


# --- alternating paths ------------------------------------------------------

def test_alternating_trivial_and_triangle():
    g = complete(3)
    assert alternating_path_to(g, 0, {(1, 2)}, 0) == [0]
    assert alternating_path_to(g, 0, {(1, 2)}, 1) == [0, 2, 1]


def test_alternating_bowtie():
    g = k1_sk2(2).graph
    m = {(1, 2), (3, 4)}
    assert alternating_path_to(g, 0, m, 1) == [0, 2, 1]


def test_alternating_rejects_bad_matching():
    with pytest.raises(GraphInputError):
        alternating_path_to(complete(3), 0, {(0, 1)}, 2)


def test_long_path_c5():
    g = cycle(5)
    q = long_alternating_path(g, 0, {(1, 2), (3, 4)})
    assert len(q) == 5 and q[0] == 0 and is_alternating(g, q, {(1, 2), (3, 4)})


def test_long_path_k5():
    g = complete(5)
    m = {(1, 2), (3, 4)}
    q = long_alternating_path(g, 0, m)
    assert len(q) == 5 and is_alternating(g, q, m) and residual_is_perfect(g, q, m)


def test_long_path_rejects_bowtie_center():
    with pytest.raises(DomainError):
        long_alternating_path(k1_sk2(2).graph, 0, {(1, 2), (3, 4)})


@pytest.mark.parametrize("seed", range(30))
def test_alternating_postconditions(seed):
    g = random_factor_critical(5 + 2 * (seed % 4), seed)
    centre = k1_sk2_center(g)
    for v in range(g.n):
        m = near_pm(g, v)
        for w in range(g.n):
            q = alternating_path_to(g, v, m, w)
            assert q[0] == v and q[-1] == w and len(q) % 2 == 1
            assert is_alternating(g, q, m) and residual_is_perfect(g, q, m)
        if v != centre:
            q = long_alternating_path(g, v, m)
            assert len(q) >= 5 and is_alternating(g, q, m) and residual_is_perfect(g, q, m)


# --- classification and crush sets ------------------------------------------

def test_classify_examples():
    cls = classify_no_factor(k1_sk2(3).graph, 3)
    assert cls.tag is FamilyTag.G0 and cls.params == (3,)
    block = generate(FamilySpec(Family.A3_DPRIME, (2,))).graph
    cls = classify_no_factor(block, 4)
    assert cls.tag is FamilyTag.G3 and cls.params == (2,)
    assert not has_factor(block, 4) and not has_hamiltonian_path(block)
    assert classify_no_factor(cycle(9), 4).tag is FamilyTag.HAS_FACTOR


def test_classify_small_and_order7():
    assert classify_no_factor(cycle(5), 3).tag is FamilyTag.SMALL_3_5
    assert classify_no_factor(cycle(7), 4).tag is FamilyTag.ORDER7_NONSPECIAL
    assert classify_no_factor(k1_sk2(3).graph, 4).tag is FamilyTag.G0
    assert classify_no_factor(cycle(7), 3).tag is FamilyTag.HAS_FACTOR


def test_classify_rejects_non_factor_critical():
    with pytest.raises(DomainError):
        classify_no_factor(cycle(8), 4)


def test_crush_examples():
    g = k1_sk2(4).graph
    cls = classify_no_factor(g, 3)
    x = crush_set(g, cls)
    assert len(x) == 5 and census(g, x).c1 == 4

    g = generate(FamilySpec(Family.A3_DPRIME, (2,))).graph
    x = crush_set(g, classify_no_factor(g, 4))
    c = census(g, x)
    assert len(x) == 4 and (c.c1, c.c3) == (2, 1) and crush_value(g, x) == 3

    g = generate(FamilySpec(Family.A1, (2, 2, 2))).graph
    cls = classify_no_factor(g, 4)
    x = crush_set(g, cls)
    assert cls.tag is FamilyTag.G1_MIN_EQ2
    assert crush_value(g, x) == len(x) - Fraction(4, 3) and len(x) >= 6


def test_crush_without_roles():
    with pytest.raises(DomainError):
        crush_set(cycle(9), FamilyClass(FamilyTag.G3, (2,)))


@pytest.mark.parametrize("tag,params,extra", [
    (Family.A2_PRIME, (1, 1, 1), 3), (Family.A2_DPRIME, (0, 2, 1), None),
    (Family.A3_PRIME, (3,), 5), (Family.A4_PRIME, (1,), None), (Family.A4_DPRIME, (2,), None),
    (Family.A4_PRIME, (3,), 11),
])
def test_roles_recover_template(tag, params, extra):
    g = generate(FamilySpec(tag, params, extra=extra)).graph
    cls = classify_no_factor(g, 4)
    assert cls.tag.value == {"A2": "G2", "A3": "G3", "A4": "G4"}[tag.value[:2]]
    x = crush_set(g, cls)
    assert crush_value(g, x) == len(x) - CRUSH_OFFSET[cls.tag]
    if g.n <= 13:
        assert not has_factor(g, 4)
