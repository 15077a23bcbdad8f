"""Components, maximum matchings and connected-matching lemmas."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import ParameterError, PreconditionError, VerificationFailed
from .graphcore import (
    BLUE,
    RED,
    Colour,
    MultiColouredGraph,
    is_almost_complete,
    is_fraction_complete,
    iter_bits,
    popcount,
    to_mask,
)
from .cyclefind import _bipartition, erdos_gallai_long_cycle


@dataclass(frozen=True)
class Component:
    vertices: frozenset
    bipartite: bool

    @property
    def odd(self) -> bool:
        return not self.bipartite


@dataclass(frozen=True)
class ConnectedMatching:
    """A matching inside one connected component of a colour slice.

    ``odd`` records whether that component contains an odd cycle.
    """

    colour: Optional[Colour]
    edges: tuple
    component: frozenset
    odd: bool

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(sorted(e)) for e in self.edges))
        object.__setattr__(self, "component", frozenset(self.component))

    @property
    def n_vertices(self) -> int:
        return 2 * len(self.edges)

    def vertices(self) -> frozenset:
        return frozenset(v for e in self.edges for v in e)

    def problems(self, g) -> list:
        out = []
        seen = set()
        for u, v in self.edges:
            if u in seen or v in seen:
                out.append(f"edge {u}-{v} shares a vertex")
            seen |= {u, v}
            if not g.adj[u] >> v & 1:
                out.append(f"missing edge {u}-{v}")
            if u not in self.component or v not in self.component:
                out.append(f"edge {u}-{v} leaves the component")
        comps = {c.vertices: c for c in components(g)}
        comp = comps.get(self.component)
        if comp is None:
            out.append("component is not a connected component of the slice")
        elif comp.odd != self.odd:
            out.append("odd flag disagrees with the component")
        return out

    def validate(self, g) -> "ConnectedMatching":
        bad = self.problems(g)
        if bad:
            raise VerificationFailed("invalid connected matching: " + "; ".join(bad))
        return self


def _colour_of(g) -> Optional[Colour]:
    return getattr(g, "colour", None)


def components(g, within: Iterable[int] = None) -> list:
    """Connected components ordered by smallest vertex, each tagged bipartite or not."""
    adj = g.adj
    mask = (1 << g.n_vertices) - 1 if within is None else to_mask(within)
    out = []
    left = mask
    while left:
        root = (left & -left).bit_length() - 1
        seen = 1 << root
        frontier = seen
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            nxt &= mask & ~seen
            seen |= nxt
            frontier = nxt
        left &= ~seen
        out.append(Component(frozenset(iter_bits(seen)), _bipartition(adj, seen) is not None))
    return out


# -- Edmonds blossom --------------------------------------------------------

def maximum_matching(g, within: Iterable[int] = None) -> list:
    """Maximum-cardinality matching of ``G[within]`` (Edmonds' blossom algorithm)."""
    n = g.n_vertices
    mask = (1 << n) - 1 if within is None else to_mask(within)
    nbrs = {v: list(iter_bits(g.adj[v] & mask)) for v in iter_bits(mask)}
    match = {v: -1 for v in nbrs}
    for v in nbrs:  # greedy warm start
        if match[v] == -1:
            for w in nbrs[v]:
                if match[w] == -1:
                    match[v], match[w] = w, v
                    break

    def find_path(root):
        used = {v: False for v in nbrs}
        parent = {v: -1 for v in nbrs}
        base = {v: v for v in nbrs}
        used[root] = True
        queue = deque([root])

        def lca(a, b):
            seen = set()
            while True:
                a = base[a]
                seen.add(a)
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if b in seen:
                    return b
                b = parent[match[b]]

        def mark(v, b, child, blossom):
            while base[v] != b:
                blossom.add(base[v])
                blossom.add(base[match[v]])
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in nbrs[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = set()
                    mark(v, cur, to, blossom)
                    mark(to, cur, v, blossom)
                    for i in nbrs:
                        if base[i] in blossom:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to, parent
                    used[match[to]] = True
                    queue.append(match[to])
        return -1, parent

    for v in nbrs:
        if match[v] != -1:
            continue
        u, parent = find_path(v)
        while u != -1:
            pv = parent[u]
            ppv = match[pv]
            match[u], match[pv] = pv, u
            u = ppv
    return sorted((v, w) for v, w in match.items() if w != -1 and v < w)


# -- connected matchings ----------------------------------------------------

def max_connected_matching(g, require_odd: bool = False) -> Optional[ConnectedMatching]:
    """Largest matching contained in a single component.

    With ``require_odd`` only non-bipartite components compete; returns None
    when there is no such component. Ties go to the component with the
    smallest vertex.
    """
    best = None
    for comp in components(g):
        if require_odd and comp.bipartite:
            continue
        if best is not None and len(comp.vertices) // 2 <= len(best.edges):
            continue
        edges = maximum_matching(g, comp.vertices)
        if best is None or len(edges) > len(best.edges):
            best = ConnectedMatching(_colour_of(g), edges, comp.vertices, comp.odd)
    return best


def _component_of(g, v) -> Component:
    for comp in components(g):
        if v in comp.vertices:
            return comp
    raise ValueError(v)


def avg_degree_connected_matching(g, m: int) -> ConnectedMatching:
    """Connected matching on at least ``m`` vertices when the average degree is >= m."""
    n = g.n_vertices
    if not 3 <= m <= n:
        raise PreconditionError(f"need 3 <= m <= n, got m={m}, n={n}")
    e2 = sum(popcount(a) for a in g.adj)
    if e2 < m * n:
        raise PreconditionError(f"average degree {Fraction(e2, n)} < {m}")
    # average degree >= m gives the edge bound for a cycle on >= m + 1 vertices
    cycle = erdos_gallai_long_cycle(g, m + 1).vertices
    edges = [(cycle[i], cycle[i + 1]) for i in range(0, len(cycle) - 1, 2)]
    comp = _component_of(g, cycle[0])
    out = ConnectedMatching(_colour_of(g), edges, comp.vertices, comp.odd).validate(g)
    assert out.n_vertices >= m
    return out


class _BipartiteView:
    """Edges of ``g`` running between two disjoint vertex sets."""

    def __init__(self, g, V1, V2):
        V1, V2 = frozenset(V1), frozenset(V2)
        if V1 & V2:
            raise ParameterError("parts overlap")
        if any(not 0 <= v < g.n_vertices for v in V1 | V2):
            raise ParameterError("part vertex out of range")
        m1, m2 = to_mask(V1), to_mask(V2)
        adj = [0] * g.n_vertices
        for v in V1:
            adj[v] = g.adj[v] & m2
        for v in V2:
            adj[v] = g.adj[v] & m1
        self.n_vertices = g.n_vertices
        self.adj = tuple(adj)
        self.colour = _colour_of(g)
        self.V1, self.V2 = V1, V2

    def edge_count(self) -> int:
        return sum(popcount(self.adj[v]) for v in self.V1)


def _best_bipartite_matching(view) -> ConnectedMatching:
    best = None
    for comp in components(view, view.V1 | view.V2):
        edges = maximum_matching(view, comp.vertices)
        if best is None or len(edges) > len(best.edges):
            best = ConnectedMatching(view.colour, edges, comp.vertices, comp.odd)
    return best


def lemma_ten_bound(eps, v2: int) -> int:
    """Matched-vertex floor ``2(1 - 3 eps)|V2|`` rounded up to an even count."""
    edges = math.ceil((1 - 3 * Fraction(eps)) * v2)
    return 2 * edges


def dense_bipartite_connected_matching(g, V1, V2, eps) -> ConnectedMatching:
    """Connected matching on >= 2(1 - 3 eps)|V2| vertices in a dense bipartite graph."""
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 100):
        raise ParameterError(f"need 0 < eps < 0.01, got {eps}")
    view = _BipartiteView(g, V1, V2)
    if len(view.V1) < len(view.V2):
        raise PreconditionError("need |V1| >= |V2|")
    if view.edge_count() < (1 - eps) * len(view.V1) * len(view.V2):
        raise PreconditionError("fewer than (1 - eps)|V1||V2| edges")
    out = _best_bipartite_matching(view).validate(view)
    if out.n_vertices < lemma_ten_bound(eps, len(view.V2)):
        raise VerificationFailed("dense bipartite matching below the guaranteed size")
    return out


def almost_complete_bipartite_connected_matching(g, V1, V2, a: int, ell: int) -> ConnectedMatching:
    """Greedy connected matching on >= 2|V2| - 2a vertices of an a-almost-complete ``g[V1, V2]``.

    ``a = 0`` is accepted as the degenerate complete case.
    """
    view = _BipartiteView(g, V1, V2)
    n1, n2 = len(view.V1), len(view.V2)
    if ell < 1 or a < 0 or not Fraction(a, ell) < Fraction(1, 2):
        raise ParameterError(f"need ell >= 1 and 0 <= a/ell < 1/2, got a={a}, ell={ell}")
    if not n1 >= n2 >= ell:
        raise PreconditionError(f"need |V1| >= |V2| >= ell, got {n1}, {n2}, {ell}")
    if not is_almost_complete(view, a, parts=(view.V1, view.V2)):
        raise PreconditionError(f"g[V1, V2] is not {a}-almost-complete")
    free1 = to_mask(view.V1)
    edges = []
    for v2 in sorted(view.V2):
        options = view.adj[v2] & free1
        if options:
            v1 = (options & -options).bit_length() - 1
            free1 &= ~(1 << v1)
            edges.append((v1, v2))
    comp = _component_of(view, next(iter(view.V2)))
    out = ConnectedMatching(view.colour, edges, comp.vertices, comp.odd).validate(view)
    if out.n_vertices < 2 * n2 - 2 * a:
        raise VerificationFailed("greedy matching below 2|V2| - 2a")
    return out


def largest_mono_component(g: MultiColouredGraph, eta) -> tuple:
    """Largest monochromatic component of a two-coloured (1 - eta)-complete graph.

    Ties prefer the lower colour, then the component with the smallest vertex.
    """
    eta = Fraction(eta)
    if not 0 < eta < Fraction(1, 3):
        raise ParameterError(f"need 0 < eta < 1/3, got {eta}")
    K = g.n_vertices
    # K >= 1/eta is not enforced: the size bound is checked on the result instead
    used = g.colours_used()
    if len(used) > 2:
        raise PreconditionError("graph uses more than two colours")
    if not is_fraction_complete(g, eta):
        raise PreconditionError("graph is not (1 - eta)-complete")
    best = None
    for c in sorted(used):
        for comp in components(g.slice(c)):
            key = (-len(comp.vertices), c, min(comp.vertices))
            if best is None or key < best[0]:
                best = (key, c, comp.vertices)
    if best is None:
        return None, frozenset()
    colour, F = best[1], best[2]
    if len(F) < (1 - 3 * eta) * K:
        raise VerificationFailed("largest monochromatic component below (1 - 3 eta)K")
    return colour, F


def _le_sqrt(x: Fraction, coef, eta: Fraction, K) -> bool:
    """Exact test of ``x <= coef * sqrt(eta) * K`` for non-negative coef, K."""
    return x <= 0 or x * x <= Fraction(coef) ** 2 * eta * K * K


@dataclass(frozen=True)
class HoleOutcome:
    """Result of the one-hole dichotomy: a big component or two witnesses."""

    kind: str  # "component" or "witnesses"
    colour: Optional[Colour] = None
    component: frozenset = frozenset()
    w_red: Optional[int] = None
    w_blue: Optional[int] = None
    W_red: frozenset = frozenset()
    W_blue: frozenset = frozenset()


def hole_component_dichotomy(g: MultiColouredGraph, W, eta, colours=(RED, BLUE)) -> HoleOutcome:
    """Either a monochromatic component on >= (1 - 2 sqrt(eta))K vertices, or
    vertices of W that are almost fully red and almost fully blue towards V \\ W.
    """
    eta = Fraction(eta)
    red, blue = colours
    K = g.n_vertices
    W = frozenset(W)
    rest = frozenset(range(K)) - W
    if not 0 < eta < Fraction(1, 20):
        raise ParameterError(f"need 0 < eta < 1/20, got {eta}")
    if K < 1 / eta:
        raise PreconditionError(f"need K >= 1/eta, got K={K}")
    if not W <= frozenset(range(K)):
        raise ParameterError("W has out-of-range vertices")
    for part in (W, rest):
        if len(part) ** 2 < 16 * eta * K * K:
            raise PreconditionError("|W| and |V \\ W| must be at least 4 sqrt(eta) K")
    if not g.colours_used() <= {red, blue}:
        raise PreconditionError("graph uses colours other than the given two")
    wm = to_mask(W)
    if any(g.adj[w] & wm for w in W):
        raise PreconditionError("W is not a hole: it spans an edge")
    floor = (1 - eta) * (K - 1)
    for v in range(K):
        deg = popcount(g.adj[v]) + (len(W) - 1 if v in W else 0)
        if deg < floor:
            raise PreconditionError(f"vertex {v}: restored graph is not (1 - eta)-complete")

    best = None
    for c in (red, blue):
        for comp in components(g.slice(c)):
            key = (-len(comp.vertices), c, min(comp.vertices))
            if best is None or key < best[0]:
                best = (key, c, comp.vertices)
    colour, F = best[1], best[2]
    if _le_sqrt(Fraction(K - len(F)), 2, eta, K):
        return HoleOutcome("component", colour=colour, component=F)

    rm = to_mask(rest)
    ra, ba = g.colour_adj(red), g.colour_adj(blue)
    W_r = frozenset(w for w in W if _le_sqrt(Fraction(len(rest) - popcount(ra[w] & rm)), 3, eta, K))
    W_b = frozenset(w for w in W if _le_sqrt(Fraction(len(rest) - popcount(ba[w] & rm)), 3, eta, K))
    if not (W_r and W_b):
        raise VerificationFailed("neither outcome of the hole dichotomy holds")
    return HoleOutcome(
        "witnesses", colour=colour, component=F,
        w_red=min(W_r), w_blue=min(W_b), W_red=W_r, W_blue=W_b,
    )
