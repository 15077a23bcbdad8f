import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mixedramsey.errors import (
    BudgetExceeded,
    GraphFormatError,
    HeaderError,
    ParameterError,
    ParityError,
    PreconditionError,
    SizeCapError,
)
from mixedramsey.graphcore import BLUE, COLOURS, GREEN, RED, MultiColouredGraph
from mixedramsey.matchfind import ConnectedMatching
from mixedramsey.regularity import (
    ClusterPartition,
    blow_up_cycle,
    build_reduced_graph,
    check_regular_pair,
    read_partition,
    regular_pair_path,
    write_partition,
)

from conftest import bipartite_pairs, complete_pairs


def _brute_deviation(g, colour, A, B, eps):
    """Max |d(A',B') - d(A,B)| over every admissible subset pair."""
    adj = g.colour_adj(colour)

    def dens(X, Y):
        return Fraction(sum(1 for x in X for y in Y if adj[x] >> y & 1), len(X) * len(Y))

    d = dens(A, B)
    best = Fraction(0)
    for sa in range(1, len(A) + 1):
        if sa < eps * len(A):
            continue
        for sub_a in itertools.combinations(A, sa):
            for sb in range(1, len(B) + 1):
                if sb < eps * len(B):
                    continue
                for sub_b in itertools.combinations(B, sb):
                    best = max(best, abs(dens(sub_a, sub_b) - d))
    return best


def test_complete_pair_is_regular():
    A, B = list(range(6)), list(range(6, 12))
    g = MultiColouredGraph.from_edges(12, bipartite_pairs(A, B), RED)
    for eps in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)):
        res = check_regular_pair(g, RED, A, B, eps)
        assert res.regular and res.density == 1 and res.deviation == 0


def test_half_joined_pair_is_irregular():
    A, B = list(range(6)), list(range(6, 12))
    g = MultiColouredGraph.from_edges(12, bipartite_pairs(A[:3], B), RED)
    res = check_regular_pair(g, RED, A, B, Fraction(2, 5))
    assert not res.regular
    assert res.deviation == Fraction(1, 2)
    wa, wb = res.witness
    assert set(wa) <= set(A[:3]) or set(wa) <= set(A[3:])


def test_size_cap_and_parameters():
    A, B = list(range(20)), list(range(20, 26))
    g = MultiColouredGraph.from_edges(26, bipartite_pairs(A, B), RED)
    with pytest.raises(SizeCapError):
        check_regular_pair(g, RED, A, B, Fraction(1, 2))
    assert check_regular_pair(g, RED, A, B, Fraction(1, 2), "heuristic").regular
    with pytest.raises(ParameterError):
        check_regular_pair(g, RED, A, A, Fraction(1, 2))
    with pytest.raises(ParameterError):
        check_regular_pair(g, RED, A[:3], B, Fraction(0))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.sampled_from([Fraction(1, 5), Fraction(1, 3), Fraction(1, 2)]),
       st.integers(0, 10 ** 6))
def test_exhaustive_matches_brute_force(na, nb, eps, seed):
    rng = random.Random(seed)
    A, B = list(range(na)), list(range(na, na + nb))
    g = MultiColouredGraph.from_edges(na + nb, [e for e in bipartite_pairs(A, B) if rng.random() < 0.5], RED)
    res = check_regular_pair(g, RED, A, B, eps)
    dev = _brute_deviation(g, RED, A, B, eps)
    assert res.deviation == dev
    assert res.regular == (dev < eps)


def test_heuristic_irregular_verdicts_are_certified():
    rng = random.Random(5)
    A, B = list(range(15)), list(range(15, 30))
    g = MultiColouredGraph.from_edges(30, bipartite_pairs(A[:7], B), RED)
    res = check_regular_pair(g, RED, A, B, Fraction(1, 3), "heuristic", seed=rng.randrange(100))
    assert not res.regular
    wa, wb = res.witness
    adj = g.colour_adj(RED)
    d = Fraction(sum(1 for x in wa for y in wb if adj[x] >> y & 1), len(wa) * len(wb))
    assert abs(d - res.density) == res.deviation >= Fraction(1, 3)


def _k12_partition():
    return ClusterPartition([], [range(0, 3), range(3, 6), range(6, 9), range(9, 12)])


def test_reduced_graph_densities_recount():
    rng = random.Random(11)
    g = MultiColouredGraph(12, {e: {rng.choice(COLOURS)} for e in complete_pairs(12)})
    part = _k12_partition()
    red = build_reduced_graph(g, part, Fraction(1, 2), Fraction(1, 3))
    for i, j in itertools.combinations(range(4), 2):
        A, B = part.classes[i], part.classes[j]
        for c in COLOURS:
            count = sum(1 for a in A for b in B if c in g.colours(a, b))
            assert red.densities[c][i][j] == Fraction(count, 9)
        expected = {c for c in COLOURS if red.densities[c][i][j] >= Fraction(1, 3)}
        if red.regular_pairs[i][j] and expected:
            assert red.graph.colours(i, j) == expected
        else:
            assert not red.graph.has_edge(i, j)


def test_reduced_graph_all_green():
    g = MultiColouredGraph.from_edges(12, complete_pairs(12), GREEN)
    red = build_reduced_graph(g, _k12_partition(), Fraction(1, 2), Fraction(1, 3))
    assert len(red.graph.edges) == 6
    assert all(cols == {GREEN} for cols in red.graph.edges.values())
    with pytest.raises(ParameterError):
        build_reduced_graph(g, _k12_partition(), Fraction(1, 2), Fraction(11, 10))


def test_partition_validation_and_format():
    p = ClusterPartition([12], [range(0, 3), range(3, 6), range(6, 9), range(9, 12)])
    assert p.k == 4 and p.cluster_size == 3
    p.validate(13, Fraction(1, 10))
    with pytest.raises(PreconditionError):
        p.validate(13, Fraction(1, 20))
    with pytest.raises(PreconditionError):
        ClusterPartition([], [[0, 1], [2]]).validate(3)
    assert read_partition(write_partition(p)) == p
    assert read_partition("2\n\n0 1\n2 3\n") == ClusterPartition([], [[0, 1], [2, 3]])
    with pytest.raises(HeaderError):
        read_partition("x\n\n0\n")
    with pytest.raises(GraphFormatError):
        read_partition("3\n\n0 1\n")


EPS_PATH = Fraction(1, 601)


@pytest.fixture(scope="module")
def pair_700():
    V1, V2 = list(range(700)), list(range(700, 1400))
    g = MultiColouredGraph.complete(1400, lambda u, v: RED if (u < 700) != (v < 700) else BLUE)
    return g, V1, V2


def test_regular_pair_path_short(pair_700):
    g, V1, V2 = pair_700
    p = regular_pair_path(g, RED, V1, V2, EPS_PATH, 5, 3, 900)
    assert len(p) == 12 and p.vertices[0] == 3 and p.vertices[-1] == 900


def test_regular_pair_path_long(pair_700):
    g, V1, V2 = pair_700
    p = regular_pair_path(g, RED, V1, V2, EPS_PATH, 642, 0, 700)
    assert p.length == 1285
    sides = [v < 700 for v in p.vertices]
    assert all(a != b for a, b in zip(sides, sides[1:]))
    with pytest.raises(PreconditionError):
        regular_pair_path(g, RED, V1, V2, EPS_PATH, 650, 0, 700)


def test_regular_pair_path_hypotheses(pair_700):
    g, V1, V2 = pair_700
    with pytest.raises(PreconditionError):
        regular_pair_path(g, RED, V1, V2, Fraction(1, 100), 5, 0, 700)
    with pytest.raises(PreconditionError):
        regular_pair_path(g, BLUE, V1, V2, EPS_PATH, 5, 0, 700)
    with pytest.raises(PreconditionError):
        regular_pair_path(g, RED, V1, V2, EPS_PATH, 0, 0, 700)
    with pytest.raises(PreconditionError):
        regular_pair_path(g, RED, V1, V2, EPS_PATH, 5, 700, 0)


def test_regular_pair_path_random_dense():
    # random pairs at this size are only tentatively regular, so the check is skipped
    for seed in range(3):
        rng = random.Random(seed)
        V1, V2 = list(range(620)), list(range(620, 1240))
        pairs = [(a, b) for a in V1 for b in V2 if rng.random() < 0.6]
        g = MultiColouredGraph.from_edges(1240, pairs, RED)
        ell = rng.randint(1, 400)
        p = regular_pair_path(g, RED, V1, V2, EPS_PATH, ell, V1[0], V2[0], check_regular=False)
        assert p.length == 2 * ell + 1


def _blown(cluster, k, reduced_pairs):
    parts = [range(i * cluster, (i + 1) * cluster) for i in range(k)]
    pairs = [e for i, j in reduced_pairs for e in bipartite_pairs(parts[i], parts[j])]
    g = MultiColouredGraph.from_edges(cluster * k, pairs, RED)
    return g, ClusterPartition([], parts)


def test_blow_up_single_edge_even():
    g, part = _blown(50, 2, [(0, 1)])
    reduced = build_reduced_graph(g, part, Fraction(1, 1000), Fraction(1, 2), "heuristic")
    m = ConnectedMatching(RED, [(0, 1)], {0, 1}, False)
    cert = blow_up_cycle(g, reduced, m, 40, "even")
    assert cert.length == 40
    with pytest.raises(ParityError):
        blow_up_cycle(g, reduced, m, 41, "odd")
    with pytest.raises(ParityError):
        blow_up_cycle(g, reduced, m, 40, "odd")


@pytest.fixture(scope="module")
def triangle():
    g, part = _blown(50, 3, [(0, 1), (1, 2), (0, 2)])
    reduced = build_reduced_graph(g, part, Fraction(1, 1000), Fraction(1, 2), "heuristic")
    return g, reduced, ConnectedMatching(RED, [(0, 1)], {0, 1, 2}, True)


def test_blow_up_triangle_odd(triangle):
    g, reduced, m = triangle
    cert = blow_up_cycle(g, reduced, m, 31, "odd")
    assert cert.length == 31
    assert any(v >= 100 for v in cert.vertices)


def test_blow_up_budget(triangle):
    g, reduced, m = triangle
    with pytest.raises(PreconditionError):
        blow_up_cycle(g, reduced, m, 200)
