"""Multicoloured graphs, colour slices, degree predicates and the text format.

Graphs are immutable. Adjacency is held as one integer bitmask per vertex, so
``adj[v] >> u & 1`` tests the pair ``uv``; everything downstream (cycle search,
matchings, regularity) works on these masks.

Any object exposing ``n_vertices`` and ``adj`` is accepted where a "graph view"
is expected, which covers both :class:`MultiColouredGraph` (union of colours)
and :class:`ColourSlice`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import (
    ColourStringError,
    DuplicatePairError,
    EmptyColourError,
    HeaderError,
    LoopError,
    ParameterError,
    VertexRangeError,
)


class Colour(enum.IntEnum):
    RED = 1
    BLUE = 2
    GREEN = 3

    @property
    def letter(self) -> str:
        return "rbg"[self - 1]

    @classmethod
    def from_letter(cls, ch: str) -> "Colour":
        try:
            return cls("rbg".index(ch.lower()) + 1)
        except ValueError:
            raise ColourStringError(f"unknown colour letter {ch!r}") from None

    @classmethod
    def parse(cls, value) -> "Colour":
        """Accept a Colour, 1..3, a letter or a full name."""
        if isinstance(value, Colour):
            return value
        if isinstance(value, int):
            return cls(value)
        text = str(value).strip().lower()
        for c in cls:
            if text in (c.letter, c.name.lower()):
                return c
        raise ColourStringError(f"unknown colour {value!r}")


RED, BLUE, GREEN = Colour.RED, Colour.BLUE, Colour.GREEN
COLOURS = (RED, BLUE, GREEN)


def parse_colour_set(text: str) -> frozenset:
    if not text:
        raise EmptyColourError("empty colour set")
    seen = []
    for ch in text:
        c = Colour.from_letter(ch)
        if c in seen:
            raise ColourStringError(f"repeated colour {ch!r} in {text!r}")
        seen.append(c)
    return frozenset(seen)


def format_colour_set(colours: Iterable[Colour]) -> str:
    return "".join(c.letter for c in sorted(colours))


# -- bitmask helpers --------------------------------------------------------

def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


# -- graphs -----------------------------------------------------------------

def _norm_pair(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class MultiColouredGraph:
    """A graph on ``range(n_vertices)`` whose edges carry non-empty colour sets.

    A simple three-coloured graph is the special case where every stored set is
    a singleton. Absent pairs are missing edges.
    """

    n_vertices: int
    edges: Mapping = field(default_factory=dict)
    _colour_adj: dict = field(init=False, repr=False, compare=False)
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n_vertices
        if not isinstance(n, int) or n < 0:
            raise ParameterError(f"vertex count must be a non-negative integer, got {n!r}")
        clean = {}
        seen_sets = {}  # colour sets repeat heavily; parse each distinct one once
        for (u, v), cols in dict(self.edges).items():
            if u == v:
                raise LoopError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"pair ({u},{v}) out of range for {n} vertices")
            key = (u, v) if u < v else (v, u)
            if key in clean:
                raise DuplicatePairError(f"pair {key} given twice")
            parsed = seen_sets.get(cols) if isinstance(cols, frozenset) else None
            if parsed is None:
                parsed = frozenset(Colour.parse(c) for c in cols)
                if isinstance(cols, frozenset):
                    seen_sets[cols] = parsed
            if not parsed:
                raise EmptyColourError(f"pair {key} has an empty colour set")
            clean[key] = parsed
        rows = {c: [0] * n for c in COLOURS}
        for (u, v), cols in clean.items():
            for c in cols:
                rows[c][u] |= 1 << v
        cadj = {}
        for c, row in rows.items():
            full = list(row)
            for u in range(n):
                for v in iter_bits(row[u]):
                    full[v] |= 1 << u
            cadj[c] = full
        union = [cadj[RED][v] | cadj[BLUE][v] | cadj[GREEN][v] for v in range(n)]
        object.__setattr__(self, "edges", MappingProxyType(dict(sorted(clean.items()))))
        object.__setattr__(self, "_colour_adj", {c: tuple(a) for c, a in cadj.items()})
        object.__setattr__(self, "adj", tuple(union))

    # construction helpers
    @classmethod
    def from_edges(cls, n: int, pairs: Iterable, colour=RED) -> "MultiColouredGraph":
        return cls(n, {_norm_pair(u, v): frozenset([Colour.parse(colour)]) for u, v in pairs})

    @classmethod
    def complete(cls, n: int, colouring) -> "MultiColouredGraph":
        """Complete graph; ``colouring(u, v)`` returns a colour or colour set."""
        edges, singles = {}, {}
        for v in range(n):
            for u in range(v):
                c = colouring(u, v)
                if isinstance(c, (Colour, int, str)):
                    s = singles.get(c)
                    if s is None:
                        s = singles[c] = frozenset([c])
                    edges[(u, v)] = s
                else:
                    edges[(u, v)] = frozenset(c)
        return cls(n, edges)

    def __hash__(self):
        return hash((self.n_vertices, tuple(self.edges.items())))

    def __eq__(self, other):
        if not isinstance(other, MultiColouredGraph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and dict(self.edges) == dict(other.edges)

    # queries
    def colours(self, u: int, v: int) -> frozenset:
        return self.edges.get(_norm_pair(u, v), frozenset())

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_pair(u, v) in self.edges

    def colour_adj(self, colour) -> tuple:
        return self._colour_adj[Colour.parse(colour)]

    def slice(self, colour) -> "ColourSlice":
        return ColourSlice(self, Colour.parse(colour))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def neighbours(self, v: int) -> list:
        return list(iter_bits(self.adj[v]))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def colours_used(self) -> frozenset:
        used = set()
        for cols in self.edges.values():
            used |= cols
        return frozenset(used)

    def is_complete(self) -> bool:
        n = self.n_vertices
        return len(self.edges) == n * (n - 1) // 2

    def induced(self, vertices: Iterable[int]) -> tuple:
        """Relabelled induced subgraph; returns ``(graph, old_ids)``."""
        old = sorted(set(vertices))
        new = {v: i for i, v in enumerate(old)}
        edges = {
            (new[u], new[v]): cols
            for (u, v), cols in self.edges.items()
            if u in new and v in new
        }
        return MultiColouredGraph(len(old), edges), old

    def with_edges(self, changes: Mapping) -> "MultiColouredGraph":
        """Copy with some pairs replaced; a falsy colour set deletes the pair."""
        edges = dict(self.edges)
        for (u, v), cols in changes.items():
            key = _norm_pair(u, v)
            if cols:
                edges[key] = frozenset(cols)
            else:
                edges.pop(key, None)
        return MultiColouredGraph(self.n_vertices, edges)


@dataclass(frozen=True)
class ColourSlice:
    """Spanning subgraph of ``base`` formed by the edges carrying ``colour``."""

    base: MultiColouredGraph
    colour: Colour

    @property
    def n_vertices(self) -> int:
        return self.base.n_vertices

    @property
    def adj(self) -> tuple:
        return self.base.colour_adj(self.colour)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def neighbours(self, v: int) -> list:
        return list(iter_bits(self.adj[v]))

    def edges(self) -> list:
        return [(u, v) for (u, v), cols in self.base.edges.items() if self.colour in cols]

    @property
    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2


def simple_slice(n: int, pairs: Iterable, colour=RED) -> ColourSlice:
    """A single-coloured graph given by its edge list, viewed as a colour slice."""
    c = Colour.parse(colour)
    return MultiColouredGraph.from_edges(n, pairs, c).slice(c)


# -- degree predicates ------------------------------------------------------

def _check_parts(g, parts):
    U, W = (frozenset(p) for p in parts)
    n = g.n_vertices
    if U & W:
        raise ParameterError("bipartite parts overlap")
    if any(not 0 <= v < n for v in U | W):
        raise ParameterError("bipartite part contains an out-of-range vertex")
    return U, W


def _degree_profile(g, within=None, parts=None):
    """Yield ``(degree, opposite_size)`` for each relevant vertex.

    ``opposite_size`` is ``N - 1`` for a (possibly induced) graph and the size
    of the other part for a bipartite graph.
    """
    adj = g.adj
    if parts is not None:
        U, W = _check_parts(g, parts)
        mu, mw = to_mask(U), to_mask(W)
        for u in U:
            yield popcount(adj[u] & mw), len(W)
        for w in W:
            yield popcount(adj[w] & mu), len(U)
        return
    verts = range(g.n_vertices) if within is None else sorted(set(within))
    m = to_mask(verts)
    size = len(verts)
    for v in verts:
        yield popcount(adj[v] & m & ~(1 << v)), size - 1


def is_almost_complete(g, a, *, within=None, parts=None) -> bool:
    """Every degree is at least ``(N - 1) - a`` (bipartite: ``|other part| - a``)."""
    if a < 0:
        raise ParameterError("a must be non-negative")
    return all(d >= other - a for d, other in _degree_profile(g, within, parts))


def is_fraction_complete(g, c, *, within=None, parts=None) -> bool:
    """``(1 - c)``-completeness: ``delta >= (1 - c)(N - 1)``, checked exactly."""
    c = Fraction(c)
    if not 0 <= c <= 1:
        raise ParameterError("c must lie in [0, 1]")
    return all(d >= (1 - c) * other for d, other in _degree_profile(g, within, parts))


def is_sparse(g, c, *, within=None, parts=None) -> bool:
    """``c``-sparsity: ``Delta <= c(N - 1)`` (bipartite: per part)."""
    c = Fraction(c)
    if not 0 <= c <= 1:
        raise ParameterError("c must lie in [0, 1]")
    return all(d <= c * other for d, other in _degree_profile(g, within, parts))


def min_degree(g, within=None) -> int:
    return min((d for d, _ in _degree_profile(g, within)), default=0)


def max_degree(g, within=None) -> int:
    return max((d for d, _ in _degree_profile(g, within)), default=0)


def edge_count(g) -> int:
    return sum(popcount(a) for a in g.adj) // 2


def count_between(g, A, B) -> int:
    mb = to_mask(B)
    return sum(popcount(g.adj[a] & mb) for a in A)


def density(g, colour, A, B) -> Fraction:
    """Exact edge density ``e(A, B) / (|A||B|)`` of one colour between disjoint sets.

    ``colour=None`` uses ``g.adj`` directly (the union, or a slice's own edges).
    """
    A, B = frozenset(A), frozenset(B)
    if not A or not B:
        raise ParameterError("density needs two non-empty sets")
    if A & B:
        raise ParameterError("density needs disjoint sets")
    view = g if colour is None else g.slice(colour)
    return Fraction(count_between(view, A, B), len(A) * len(B))


# -- text format --------------------------------------------------------------

def read_graph(data) -> MultiColouredGraph:
    """Parse the line-oriented text format (header ``N`` then ``u v colours``)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    n = None
    edges = {}
    for lineno, raw in enumerate(data.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 1 or not tokens[0].isdigit():
                raise HeaderError(f"expected vertex count, got {line!r}", lineno)
            n = int(tokens[0])
            continue
        if len(tokens) == 2:
            raise EmptyColourError("missing colour set", lineno)
        if len(tokens) != 3:
            raise HeaderError(f"expected 'u v colours', got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise VertexRangeError(f"non-integer vertex in {line!r}", lineno) from None
        if u == v:
            raise LoopError(f"loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"pair ({u},{v}) out of range for {n} vertices", lineno)
        key = _norm_pair(u, v)
        if key in edges:
            raise DuplicatePairError(f"pair {key} given twice", lineno)
        try:
            edges[key] = parse_colour_set(tokens[2])
        except (EmptyColourError, ColourStringError) as exc:
            raise type(exc)(str(exc), lineno) from None
    if n is None:
        raise HeaderError("missing vertex-count header")
    return MultiColouredGraph(n, edges)


def write_graph(g: MultiColouredGraph) -> bytes:
    lines = [str(g.n_vertices)]
    lines += [f"{u} {v} {format_colour_set(cols)}" for (u, v), cols in sorted(g.edges.items())]
    return ("\n".join(lines) + "\n").encode("utf-8")
