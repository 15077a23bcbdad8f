import itertools
import random
from fractions import Fraction

import pytest

from mixedramsey.errors import BudgetExceeded, ParameterError, VerificationFailed
from mixedramsey.extremal import LowerBoundSpec, build_construction_1
from mixedramsey.graphcore import COLOURS, RED, MultiColouredGraph
from mixedramsey.ramsey import (
    CycleTriple,
    Parameters,
    _run_prefix,
    certify_lower_bound,
    even_floor,
    forbidden_cycles,
    odd_floor,
    search_ramsey,
    theorem_A_value,
    theorem_B_side_conditions,
    theorem_C_value,
    verify_avoiding,
)

from conftest import brute_has_cycle


def test_parity_floors():
    assert (even_floor(Fraction(11, 2)), odd_floor(Fraction(11, 2))) == (4, 5)
    assert (even_floor(6), odd_floor(6)) == (6, 5)
    assert (even_floor(7), odd_floor(7)) == (6, 7)
    with pytest.raises(ParameterError):
        even_floor(1)
    with pytest.raises(ParameterError):
        odd_floor(Fraction(1, 2))


def test_triple_profiles():
    assert CycleTriple(4, 4, 3, "A").lengths == (4, 4, 3)
    with pytest.raises(ParameterError):
        CycleTriple(4, 5, 3, "A")
    with pytest.raises(ParameterError):
        CycleTriple(4, 4, 2)
    with pytest.raises(ParameterError):
        CycleTriple(4, 4, 3, "Z")


def test_theorem_A_examples():
    assert theorem_A_value(CycleTriple(4, 4, 3)) == 9
    assert theorem_A_value(CycleTriple(6, 4, 11)) == 14
    with pytest.raises(ParameterError):
        theorem_A_value(CycleTriple(4, 6, 3))


def test_theorem_C_examples():
    assert theorem_C_value(CycleTriple(4, 3, 3)) == 13
    assert theorem_C_value(CycleTriple(4, 5, 3)) == 13
    assert theorem_C_value(CycleTriple(4, 7, 9)) == 19
    with pytest.raises(ParameterError):
        theorem_C_value(CycleTriple(4, 4, 3))


def test_certify_examples():
    out = certify_lower_bound(CycleTriple(4, 4, 3))
    assert out.N == 8 and out.found and out.witness.n_vertices == 8
    assert out.stats["source"].startswith("lb1")
    out = certify_lower_bound(CycleTriple(6, 4, 11))
    assert out.N == 13 and out.stats["source"] == "lb2"
    out = certify_lower_bound(CycleTriple(4, 4, 5))
    assert out.N == 8 and out.stats["lb2_vertices"] == 6


def test_verify_avoiding_rejects():
    g = MultiColouredGraph.from_edges(4, list(itertools.combinations(range(4), 2)), RED)
    with pytest.raises(VerificationFailed):
        verify_avoiding(g, CycleTriple(4, 4, 3))
    assert [c for c, _ in forbidden_cycles(g, (4, 4, 3))] == [RED]
    partial = MultiColouredGraph.from_edges(4, [(0, 1)], RED)
    with pytest.raises(VerificationFailed):
        verify_avoiding(partial, CycleTriple(4, 4, 3))


def _brute_avoids(g, lengths):
    return not any(
        L <= g.n_vertices and brute_has_cycle(g.slice(c), L) for c, L in zip(COLOURS, lengths)
    )


@pytest.mark.parametrize("triple,N", [((4, 4, 3), 5), ((4, 4, 3), 8), ((3, 3, 3), 5)])
def test_search_examples(triple, N):
    out = search_ramsey(CycleTriple(*triple), N)
    assert out.found and out.witness.n_vertices == N
    assert _brute_avoids(out.witness, triple)


def test_witness_restricts_downwards():
    out = search_ramsey(CycleTriple(4, 4, 3), 8)
    for n in range(3, 8):
        sub = MultiColouredGraph(n, {e: c for e, c in out.witness.edges.items() if e[1] < n})
        verify_avoiding(sub, CycleTriple(4, 4, 3))


def test_construction_restriction_is_witness_at_5():
    g = build_construction_1(LowerBoundSpec(4, 4, 3))
    sub = MultiColouredGraph(5, {e: c for e, c in g.edges.items() if e[1] < 5})
    verify_avoiding(sub, CycleTriple(4, 4, 3))


def test_budget_exceeded_carries_stats():
    with pytest.raises(BudgetExceeded) as info:
        search_ramsey(CycleTriple(4, 4, 4), 11, budget=500)
    assert info.value.stats["nodes"] > 500


def test_dead_prefix_is_exhausted():
    # colour every edge of K6 except (4, 5) so that 4 and 5 share a red, a blue and a green neighbour
    rng = random.Random(1)
    edges = [(u, v) for v in range(1, 6) for u in range(v)]
    forced = {(0, 4): 0, (0, 5): 0, (1, 4): 1, (1, 5): 1, (2, 4): 2, (2, 5): 2}
    for _ in range(2000):
        colouring = {e: forced.get(e, rng.randrange(3)) for e in edges[:-1]}
        g = MultiColouredGraph(6, {e: {COLOURS[c]} for e, c in colouring.items()})
        if _brute_avoids(g, (3, 3, 3)):
            break
    else:
        pytest.fail("no triangle-free prefix found")
    for c in range(3):
        full = g.with_edges({(4, 5): {COLOURS[c]}})
        assert not _brute_avoids(full, (3, 3, 3))
    status, found, stats = _run_prefix(((3, 3, 3), 6, False, 10 ** 4, [colouring[e] for e in edges[:-1]]))
    assert status == "exhausted" and found is None


def test_symmetry_agrees_small():
    for lengths in itertools.product(range(3, 6), repeat=3):
        for N in range(3, 7):
            a = search_ramsey(CycleTriple(*lengths), N, symmetry=True).found
            b = search_ramsey(CycleTriple(*lengths), N, symmetry=False).found
            assert a == b


def test_stats_text():
    out = search_ramsey(CycleTriple(4, 4, 3), 5)
    text = out.stats_text()
    assert "result=witness" in text and "nodes=" in text
    assert all("=" in line for line in text.splitlines())
    assert out.as_dict()["result"] == "witness"


def test_parallel_matches_serial():
    serial = search_ramsey(CycleTriple(4, 4, 3), 6)
    parallel = search_ramsey(CycleTriple(4, 4, 3), 6, threads=2, split_depth=3)
    assert parallel.found == serial.found
    again = search_ramsey(CycleTriple(4, 4, 3), 6, threads=2, split_depth=3)
    assert again.witness == parallel.witness


def test_side_conditions_examples():
    eta = Fraction(1, 10 ** 4)
    out = theorem_B_side_conditions(Parameters(1, 1, 1, eta))
    assert out["c"] == 3 and out["iv"] and not out["v"] and not out["vi"]
    out = theorem_B_side_conditions(Parameters(1, 1, 2, eta))
    assert out["c"] == 3 and out["v"] and out["vi"]
    with pytest.raises(ParameterError):
        theorem_B_side_conditions(Parameters(1, 2, 1, eta))


def test_side_conditions_window():
    out = theorem_B_side_conditions(Parameters(1, 1, 1, Fraction(1, 100)), k=1000)
    assert out["K_window"] == (Fraction(299, 100), Fraction(599, 200))
    assert out["K_range"] == (2990, 2995)
    # H2 needs (alpha1 - alpha2)^16 <= eta
    assert theorem_B_side_conditions(Parameters(1, 1, 1, Fraction(1, 100)))["iv_H2_allowed"]
    assert not theorem_B_side_conditions(Parameters(2, 1, 1, Fraction(1, 100)))["iv_H2_allowed"]
