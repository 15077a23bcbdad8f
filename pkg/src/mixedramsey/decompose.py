"""Bipartite / odd-component decomposition of a graph without large odd matchings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EdgeBoundViolation, PreconditionError
from .graphcore import popcount, to_mask
from .matchfind import components, maximum_matching
from .reports import Report


@dataclass(frozen=True)
class Decomposition:
    v_prime: frozenset
    v_dprime: frozenset
    m: int

    def __post_init__(self):
        object.__setattr__(self, "v_prime", frozenset(self.v_prime))
        object.__setattr__(self, "v_dprime", frozenset(self.v_dprime))


def _edges_within(g, verts) -> int:
    m = to_mask(verts)
    return sum(popcount(g.adj[v] & m) for v in verts) // 2


def verify_decomposition(g, d: Decomposition) -> Report:
    """Check the four clauses independently of how ``d`` was produced.

    Tags: ``partition``, ``i`` (V' not bipartite), ``ii`` (a component of
    G[V''] is bipartite), ``iii`` (edge bound), ``iv`` (edges across).
    """
    rep = Report()
    everything = frozenset(range(g.n_vertices))
    if d.v_prime & d.v_dprime or d.v_prime | d.v_dprime != everything:
        rep.add("partition", "V' and V'' do not partition V")
    if not all(c.bipartite for c in components(g, d.v_prime)):
        rep.add("i", "G[V'] contains an odd cycle")
    for c in components(g, d.v_dprime):
        if c.bipartite:
            rep.add("ii", f"component {sorted(c.vertices)} of G[V''] is bipartite")
            break
    e = _edges_within(g, d.v_dprime)
    if e > Fraction(d.m * len(d.v_dprime), 2):
        rep.add("iii", f"G[V''] has {e} > m|V''|/2 edges")
    mp = to_mask(d.v_prime)
    crossing = sum(popcount(g.adj[v] & mp) for v in d.v_dprime)
    if crossing:
        rep.add("iv", f"{crossing} edges between V' and V''")
    return rep


def decompose(g, m: int) -> Decomposition:
    """Split V into the bipartite components (V') and the odd components (V'').

    Requires that no odd component carries a matching on >= m vertices. The
    edge bound on G[V''] is re-checked and raises :class:`EdgeBoundViolation`
    rather than returning an unsound answer.
    """
    n = g.n_vertices
    if not 3 <= m <= n:
        raise PreconditionError(f"need 3 <= m <= n, got m={m}, n={n}")
    v1, v2 = set(), set()
    for comp in components(g):
        if comp.bipartite:
            v1 |= comp.vertices
            continue
        size = 2 * len(maximum_matching(g, comp.vertices))
        if size >= m:
            raise PreconditionError(
                f"odd component containing {min(comp.vertices)} has a matching on {size} >= {m} vertices"
            )
        v2 |= comp.vertices
    d = Decomposition(v1, v2, m)
    rep = verify_decomposition(g, d)
    if "iii" in rep.tags:
        raise EdgeBoundViolation(rep.violations[0].detail)
    assert rep.ok, rep.violations
    return d
