import itertools

import pytest

from mixedramsey.cyclefind import find_cycle_exact
from mixedramsey.errors import ParameterError
from mixedramsey.extremal import (
    POLICIES,
    LowerBoundSpec,
    Policy,
    build_construction_1,
    build_construction_2,
    construction_1_parts,
    construction_2_parts,
    gen_H,
    gen_K,
    gen_Kstar,
)
from mixedramsey.graphcore import BLUE, GREEN, RED
from mixedramsey.stability import detect_structure, verify_witness

from conftest import brute_has_cycle

SWEEP = [
    (r, b, g)
    for r in range(4, 13, 2)
    for b in range(4, 13, 2)
    for g in range(3, 12, 2)
]


def _avoids(graph, spec):
    for colour, length in ((RED, spec.n_red), (BLUE, spec.n_blue), (GREEN, spec.n_green)):
        if length <= graph.n_vertices and find_cycle_exact(graph.slice(colour), length) is not None:
            return False
    return True


def _is_complete(graph):
    n = graph.n_vertices
    return len(graph.edges) == n * (n - 1) // 2


def test_spec_parity():
    with pytest.raises(ParameterError):
        LowerBoundSpec(5, 4, 3)
    with pytest.raises(ParameterError):
        LowerBoundSpec(4, 4, 4)


def test_construction_1_small():
    s = LowerBoundSpec(4, 4, 3)
    assert [len(p) for p in construction_1_parts(s)] == [3, 3, 1, 1]
    g = build_construction_1(s)
    assert g.n_vertices == 8 and _is_complete(g)
    assert _avoids(g, s)
    for colour, length in ((RED, 4), (BLUE, 4), (GREEN, 3)):
        assert not brute_has_cycle(g.slice(colour), length)
    with pytest.raises(ParameterError):
        build_construction_1(LowerBoundSpec(4, 2, 3))


def test_construction_2_small():
    s = LowerBoundSpec(4, 4, 3)
    assert [len(p) for p in construction_2_parts(s)] == [1, 1, 2]
    g = build_construction_2(s)
    assert g.n_vertices == 4 and _is_complete(g) and _avoids(g, s)
    g = build_construction_2(LowerBoundSpec(6, 6, 7))
    # the size formula gives 3 + 3 + 7 - 3 = 10
    assert g.n_vertices == 10 and _avoids(g, LowerBoundSpec(6, 6, 7))


def test_policy_colouring():
    assert Policy.ALTERNATING.colour(0, 2) == RED
    assert Policy.ALTERNATING.colour(0, 1) == BLUE
    assert Policy.ALL_BLUE.colour(0, 1) == BLUE
    assert Policy("all-red") is Policy.ALL_RED


@pytest.mark.parametrize("triple", [t for t in SWEEP if t[0] >= t[1]])
def test_constructions_avoid_cycles(triple):
    s = LowerBoundSpec(*triple)
    r, b, g = triple
    for policy in POLICIES:
        graph = build_construction_1(s, policy)
        assert graph.n_vertices == 2 * r + b - 4 and _is_complete(graph)
        assert _avoids(graph, s), policy
    graph = build_construction_2(s)
    assert graph.n_vertices == r // 2 + b // 2 + g - 3 and _is_complete(graph)
    assert _avoids(graph, s)


def test_all_red_policy_counterexample_below_diagonal():
    # with n_blue/2 - 1 >= n_red, an all-red V3 holds a red cycle of length n_red
    failing = []
    for r, b, g in SWEEP:
        if r >= b:
            continue
        s = LowerBoundSpec(r, b, g)
        for policy in POLICIES:
            if not _avoids(build_construction_1(s, policy), s):
                failing.append((r, b, policy))
    assert sorted(set(failing)) == [(4, 10, Policy.ALL_RED), (4, 12, Policy.ALL_RED)]


def test_construction_2_below_diagonal():
    for r, b, g in SWEEP:
        if r < b:
            s = LowerBoundSpec(r, b, g)
            assert _avoids(build_construction_2(s), s)


def test_gen_H_extreme():
    g, w = gen_H(6, 3, 0, 0, RED, BLUE, seed=1)
    X1, X2 = w.parts["X1"], w.parts["X2"]
    assert len(X1) == 6 and len(X2) == 3
    assert all(g.colours(u, v) == {RED} for u, v in itertools.combinations(sorted(X1), 2))
    assert all(g.colours(u, v) == {BLUE} for u in X1 for v in X2)
    assert verify_witness(g, w).ok
    assert detect_structure(g, "H", w.params) is not None
    with pytest.raises(ParameterError):
        gen_H(0, 3)


def test_gen_K_pattern():
    g, w = gen_K(2, 2, 3, c=0, seed=4)
    p = w.parts
    assert all(g.colours(u, v) == {RED} for u in p["X1"] for v in p["X3"])
    assert all(g.colours(u, v) == {BLUE} for u in p["X2"] for v in p["X3"])
    assert all(g.colours(u, v) == {GREEN} for u, v in itertools.combinations(sorted(p["X3"]), 2))
    assert detect_structure(g, "K", w.params) is not None


def test_gen_Kstar_pattern():
    g, w = gen_Kstar(2, 2, 2, 2, 4, c=0, seed=2)
    p = w.parts
    for a, b, colour in (("X1", "Y1", RED), ("X2", "Y2", RED), ("X1", "Y2", BLUE),
                         ("X2", "Y1", BLUE), ("X1", "X2", GREEN), ("Y1", "Y2", GREEN)):
        assert all(g.colours(u, v) == {colour} for u in p[a] for v in p[b])
    assert detect_structure(g, "Kstar", w.params) is not None


def test_generators_seeded():
    assert gen_K(3, 2, 4, seed=9)[0] == gen_K(3, 2, 4, seed=9)[0]
    assert gen_H(4, 3, seed=5)[0] == gen_H(4, 3, seed=5)[0]


def test_deletions_stay_in_class():
    g, w = gen_K(3, 3, 4, c=2, seed=3, deletions=6)
    assert len(g.edges) < 45
    assert verify_witness(g, w).ok
