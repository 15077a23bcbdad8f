import random

import pytest
from hypothesis import given, settings, strategies as st

from mixedramsey.decompose import Decomposition, decompose, verify_decomposition
from mixedramsey.errors import PreconditionError
from mixedramsey.matchfind import components, maximum_matching

from conftest import cycle_pairs, slice_of

C4_C5 = slice_of(9, cycle_pairs(range(4)) + cycle_pairs(range(4, 9)))


def test_component_split():
    d = decompose(C4_C5, 6)
    assert d.v_prime == frozenset(range(4)) and d.v_dprime == frozenset(range(4, 9))
    assert verify_decomposition(C4_C5, d).ok


def test_bipartite_only():
    g = slice_of(9, cycle_pairs(range(6)) + [(6, 7), (7, 8)])
    d = decompose(g, 3)
    assert d.v_dprime == frozenset() and d.v_prime == frozenset(range(9))


def test_large_odd_matching_rejected():
    g = slice_of(10, cycle_pairs(range(5)) + cycle_pairs(range(5, 10)))
    with pytest.raises(PreconditionError):
        decompose(g, 4)
    with pytest.raises(PreconditionError):
        decompose(g, 2)


def test_verifier_flags():
    d = decompose(C4_C5, 6)
    swapped = Decomposition(d.v_dprime, d.v_prime, 6)
    rep = verify_decomposition(C4_C5, swapped)
    assert not rep.ok and {"i", "ii"} <= rep.tags
    moved = Decomposition(d.v_prime | {4}, d.v_dprime - {4}, 6)
    rep = verify_decomposition(C4_C5, moved)
    assert not rep.ok and "iv" in rep.tags
    overlap = Decomposition(d.v_prime | {4}, d.v_dprime, 6)
    assert "partition" in verify_decomposition(C4_C5, overlap).tags


def _planted(rng, n):
    pairs, v = [], 0
    while v < n:
        kind = rng.random()
        if kind < 0.4 and v + 5 <= n:
            size = rng.choice([3, 5])
            pairs += cycle_pairs(range(v, v + size))
            v += size
        else:
            size = min(n - v, rng.randint(1, 8))
            left = list(range(v, v + (size + 1) // 2))
            right = list(range(v + len(left), v + size))
            for x in left:
                for y in right:
                    if rng.random() < 0.5:
                        pairs.append((x, y))
            v += size
    return slice_of(n, pairs)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 40), st.integers(0, 10 ** 6))
def test_decompose_verifies_on_planted(n, seed):
    rng = random.Random(seed)
    g = _planted(rng, n)
    odd_sizes = [2 * len(maximum_matching(g, c.vertices)) for c in components(g) if c.odd]
    m = max([3] + [s + 1 for s in odd_sizes])
    if m > n:
        return
    d = decompose(g, m)
    assert verify_decomposition(g, d).ok
