import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mixedramsey.extremal import gen_H, gen_K, gen_Kstar
from mixedramsey.graphcore import BLUE, GREEN, RED, MultiColouredGraph
from mixedramsey.stability import (
    HParams,
    KParams,
    KstarParams,
    StructureWitness,
    detect_structure,
    make_params,
    stability_class_params,
    verify_witness,
)

from conftest import complete_pairs

K_RULES = {(0, 2): RED, (1, 2): BLUE, (2, 2): GREEN}
KSTAR_RULES = {(0, 2): RED, (1, 3): RED, (0, 3): BLUE, (1, 2): BLUE, (0, 1): GREEN, (2, 3): GREEN}


def _oracle_ok(g, labels, floors, rules, c, z=None):
    """Independent clause check for the pairwise classes."""
    n = g.n_vertices
    counts = [labels.count(i) for i in range(len(floors))]
    if any(cnt < f for cnt, f in zip(counts, floors)):
        return False
    if z is not None and counts[2] + counts[3] < z:
        return False
    for v in range(n):
        if (n - 1) - sum(1 for u in range(n) if u != v and g.colours(u, v)) > c:
            return False
    for u, v in itertools.combinations(range(n), 2):
        cols = g.colours(u, v)
        if not cols:
            continue
        key = tuple(sorted((labels[u], labels[v])))
        if key in rules and cols != {rules[key]}:
            return False
    return True


def _oracle_exists(g, floors, rules, c, z=None):
    for labels in itertools.product(range(len(floors)), repeat=g.n_vertices):
        if _oracle_ok(g, list(labels), floors, rules, c, z):
            return True
    return False


def test_verify_planted_K_and_mutations():
    g, w = gen_K(2, 2, 3, seed=1)
    assert verify_witness(g, w).ok
    swapped = StructureWitness("K", {"X1": w.parts["X2"], "X2": w.parts["X1"], "X3": w.parts["X3"]}, w.params)
    rep = verify_witness(g, swapped)
    assert {"exclusive:X1-X3", "exclusive:X2-X3"} <= rep.tags
    moved = next(iter(w.parts["X3"]))
    shrunk = StructureWitness("K", {"X1": w.parts["X1"] | {moved}, "X2": w.parts["X2"],
                                    "X3": w.parts["X3"] - {moved}}, w.params)
    assert "size:X3" in verify_witness(g, shrunk).tags


def test_partition_clause():
    g, w = gen_K(2, 2, 3, seed=1)
    parts = dict(w.parts)
    parts["X1"] = parts["X1"] | parts["X2"]
    assert "partition" in verify_witness(g, StructureWitness("K", parts, w.params)).tags


def test_detect_examples():
    for seed in range(5):
        g, w = gen_H(5, 4, seed=seed)
        assert detect_structure(g, "H", w.params) is not None
    k8 = MultiColouredGraph.from_edges(8, complete_pairs(8), RED)
    assert detect_structure(k8, "K", KParams(2, 2, 2, 0)) is None
    g, w = gen_Kstar(2, 2, 2, 2, 4, 0)
    found = detect_structure(g, "Kstar", w.params)
    assert found is not None and verify_witness(g, found).ok


def test_params_from_dict():
    g, w = gen_K(2, 2, 3, seed=2)
    assert detect_structure(g, "K", {"x1": 2, "x2": 2, "x3": 3, "c": 0}) is not None
    assert make_params("H", x1=1, x2=1, c1=0, c2=0) == HParams(1, 1, 0, 0)


def _random_graph(n, rng, p_missing=0.1):
    edges = {}
    for e in complete_pairs(n):
        if rng.random() < p_missing:
            continue
        edges[e] = frozenset([rng.choice((RED, BLUE, GREEN))])
    return MultiColouredGraph(n, edges)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 10 ** 6))
def test_K_detection_matches_enumerator(n, seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        g = gen_K(1, 1, n - 2, seed=seed)[0]
        # perturb a single pair so both outcomes occur
        u, v = rng.sample(range(n), 2)
        g = g.with_edges({(min(u, v), max(u, v)): {rng.choice((RED, BLUE, GREEN))}})
    else:
        g = _random_graph(n, rng)
    params = KParams(1, 1, 1, 1)
    found = detect_structure(g, "K", params)
    assert (found is not None) == _oracle_exists(g, [1, 1, 1], K_RULES, 1)
    if found is not None:
        assert _oracle_ok(g, list(found.labelling(n)), [1, 1, 1], K_RULES, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 7), st.integers(0, 10 ** 6))
def test_Kstar_detection_matches_enumerator(n, seed):
    rng = random.Random(seed)
    g = gen_Kstar(1, 1, 1, n - 3, 2, seed=seed)[0]
    u, v = rng.sample(range(n), 2)
    g = g.with_edges({(min(u, v), max(u, v)): {rng.choice((RED, BLUE, GREEN))}})
    params = KstarParams(1, 1, 1, 1, 2, 0)
    found = detect_structure(g, "Kstar", params)
    assert (found is not None) == _oracle_exists(g, [1, 1, 1, 1], KSTAR_RULES, 0, z=2)


def test_monotone_in_c_and_floors():
    for seed in range(15):
        g, w = gen_K(2, 2, 3, c=1, seed=seed, deletions=3)
        p = w.params
        assert detect_structure(g, "K", p) is not None
        assert detect_structure(g, "K", KParams(p.x1, p.x2, p.x3, p.c + 1)) is not None
        assert detect_structure(g, "K", KParams(1, 1, 2, p.c)) is not None


def test_heuristic_is_sound_above_cap():
    g, w = gen_K(5, 5, 6, seed=3)
    found = detect_structure(g, "K", w.params, seed=1)
    if found is not None:
        assert verify_witness(g, found).ok
    assert detect_structure(g, "K", w.params, exhaustive_limit=20) is not None


def test_H_clauses():
    g, w = gen_H(4, 3, 0, 0, RED, BLUE, seed=3)
    x = next(iter(w.parts["X1"]))
    y = next(iter(w.parts["X2"]))
    bad = g.with_edges({tuple(sorted((x, y))): {RED}})
    tags = verify_witness(bad, w).tags
    assert "b:complete" in tags and "b:sparse" in tags


def test_stability_params_adapter():
    out = stability_class_params(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 10 ** 40), 1000)
    assert set(out) == {"H1", "H2", "K", "Kstar1", "Kstar2"}
    assert out["H1"].gamma1 == RED and out["H2"].gamma1 == BLUE
    assert out["K"].x3 == pytest.approx(500, rel=1e-6)
