from fractions import Fraction

import pytest

from pathfactors.bipartite import (AuxiliaryBipartite, AuxPath, AuxPathSystem, HallWitness,
                                   brute_force_hypotheses, construct, verify_aux_system, witness_holds)
from pathfactors.graph import GraphInputError, SearchBudgetExceeded

from corpus import random_aux


def S(i):
    return ("S", i)


def T(i):
    return ("T", i)


def test_single_matching_edge():
    aux = AuxiliaryBipartite.build([0], [0], [(0, 0)], t1=[0])
    out = construct(aux)
    assert isinstance(out, AuxPathSystem)
    assert len(out.paths) == 1 and set(out.paths[0].nodes) == {S(0), T(0)} and out.paths[0].shape == "I"


def test_minimal_shape_two():
    aux = AuxiliaryBipartite.build([0], [1, 2], [(0, 1), (0, 2)], t2=[1, 2])
    out = construct(aux)
    assert isinstance(out, AuxPathSystem) and len(out.paths) == 1
    p = out.paths[0]
    assert p.shape == "II" and set(p.nodes) == {S(0), T(1), T(2)} and p.nodes[1] == S(0)
    assert verify_aux_system(aux, out) == (True, None)
    assert brute_force_hypotheses(aux)


def test_hall_violation():
    aux = AuxiliaryBipartite.build([0], [1, 2], [(0, 1), (0, 2)], t1=[1, 2])
    out = construct(aux)
    assert isinstance(out, HallWitness)
    assert out.side == "T_SIDE" and set(out.nodes) == {1, 2} and out.neighborhood_size == 1
    assert out.bound == 2 and witness_holds(aux, out)
    assert not brute_force_hypotheses(aux)


def test_empty_instance():
    aux = AuxiliaryBipartite.build([], [], [])
    assert brute_force_hypotheses(aux)
    out = construct(aux)
    assert isinstance(out, AuxPathSystem) and out.paths == ()


def test_s_side_witness():
    aux = AuxiliaryBipartite.build([0, 1], [5], [(0, 5), (1, 5)])
    out = construct(aux)
    assert isinstance(out, HallWitness) and out.side == "S_SIDE" and witness_holds(aux, out)


def test_forbidden_edge_clause():
    aux = AuxiliaryBipartite.build([0], [1, 2], [(0, 1), (0, 2)], forbidden=[(0, 1)], t2=[1, 2])
    bad = AuxPathSystem((AuxPath((T(1), S(0), T(2))),))
    assert verify_aux_system(aux, bad) == (False, "E(A) ⊆ E(G)−L")


def test_uncovered_s_clause():
    aux = AuxiliaryBipartite.build([0, 1], [1], [(0, 1), (1, 1)])
    sys_ = AuxPathSystem((AuxPath((S(0), T(1))),))
    assert verify_aux_system(aux, sys_) == (False, "covers S")


def test_input_validation():
    with pytest.raises(GraphInputError):
        AuxiliaryBipartite.build([0], [1], [(0, 1)], forbidden=[(0, 2)])
    with pytest.raises(GraphInputError):
        AuxiliaryBipartite.build([0], [1], [(0, 1)], t1=[1], t2=[1])


def test_brute_force_budget():
    aux = AuxiliaryBipartite.build(range(20), [0], [])
    with pytest.raises(SearchBudgetExceeded):
        brute_force_hypotheses(aux)


def test_witness_bound_is_fractional():
    w = HallWitness("T_SIDE", (1,), 0, Fraction(1, 2))
    assert w.holds()


@pytest.mark.parametrize("chunk", range(10))
def test_random_instances_both_directions(chunk):
    for seed in range(chunk * 200, chunk * 200 + 200):
        aux = random_aux(seed)
        out = construct(aux)
        if isinstance(out, AuxPathSystem):
            assert verify_aux_system(aux, out) == (True, None)
        else:
            assert witness_holds(aux, out)
            assert not brute_force_hypotheses(aux)
