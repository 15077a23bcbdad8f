import itertools
import random

import pytest

from mixedramsey.graphcore import COLOURS, MultiColouredGraph, simple_slice

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_line():
    def record(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" :: {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


# -- graph builders ---------------------------------------------------------

def complete_pairs(n):
    return list(itertools.combinations(range(n), 2))


def cycle_pairs(vertices):
    vs = list(vertices)
    return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def bipartite_pairs(X, Y):
    return [(x, y) for x in X for y in Y]


def slice_of(n, pairs):
    return simple_slice(n, pairs)


def random_pairs(n, p, rng):
    return [e for e in complete_pairs(n) if rng.random() < p]


def random_colouring(n, rng, p_missing=0.0):
    edges = {}
    for e in complete_pairs(n):
        if rng.random() < p_missing:
            continue
        edges[e] = frozenset([rng.choice(COLOURS)])
    return MultiColouredGraph(n, edges)


# -- independent oracles ----------------------------------------------------

def adjacency_sets(g):
    return [{u for u in range(g.n_vertices) if g.adj[v] >> u & 1} for v in range(g.n_vertices)]


def brute_has_cycle(g, length):
    """Permutation enumeration: fix the smallest vertex first."""
    nb = adjacency_sets(g)
    for combo in itertools.combinations(range(g.n_vertices), length):
        first, rest = combo[0], combo[1:]
        for perm in itertools.permutations(rest):
            if perm[0] > perm[-1]:
                continue
            seq = (first,) + perm
            if all(seq[(i + 1) % length] in nb[seq[i]] for i in range(length)):
                return True
    return False


def brute_max_matching(edges):
    """Size of a maximum matching by exhaustive recursion over the edge list."""
    edges = list(edges)

    def best(i, used):
        if i == len(edges):
            return 0
        u, v = edges[i]
        skip = best(i + 1, used)
        if u in used or v in used:
            return skip
        return max(skip, 1 + best(i + 1, used | {u, v}))

    return best(0, frozenset())


def brute_components(g):
    nb = adjacency_sets(g)
    seen, out = set(), []
    for s in range(g.n_vertices):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            v = stack.pop()
            for w in nb[v] - comp:
                comp.add(w)
                stack.append(w)
        seen |= comp
        out.append(comp)
    return out


def brute_has_odd_cycle(g, vertices):
    vs = sorted(vertices)
    sub = g
    for length in range(3, len(vs) + 1, 2):
        nb = adjacency_sets(sub)
        for combo in itertools.combinations(vs, length):
            first, rest = combo[0], combo[1:]
            for perm in itertools.permutations(rest):
                seq = (first,) + perm
                if all(seq[(i + 1) % length] in nb[seq[i]] for i in range(length)):
                    return True
    return False


@pytest.fixture
def rng():
    return random.Random(20240601)
