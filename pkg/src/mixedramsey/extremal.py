"""Lower-bound colourings and planted generators for the structure classes."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError
from .graphcore import BLUE, COLOURS, GREEN, RED, Colour, MultiColouredGraph
from .stability import HParams, KParams, KstarParams, StructureWitness, verify_witness


class Policy(str, enum.Enum):
    """How the edges inside V3 and V4 of the first construction are coloured."""

    ALL_RED = "all-red"
    ALL_BLUE = "all-blue"
    ALTERNATING = "alternating"

    def colour(self, i: int, j: int) -> Colour:
        if self is Policy.ALL_RED:
            return RED
        if self is Policy.ALL_BLUE:
            return BLUE
        return RED if (i + j) % 2 == 0 else BLUE


POLICIES = tuple(Policy)


@dataclass(frozen=True)
class LowerBoundSpec:
    """Resolved cycle lengths: even red, even blue, odd green."""

    n_red: int
    n_blue: int
    n_green: int

    def __post_init__(self):
        if self.n_red % 2 or self.n_blue % 2:
            raise ParameterError("red and blue cycle lengths must be even")
        if self.n_green % 2 == 0:
            raise ParameterError("green cycle length must be odd")
        if min(self.n_red, self.n_blue) < 2 or self.n_green < 3:
            raise ParameterError("cycle lengths too small")


def _sizes_1(s: LowerBoundSpec) -> list:
    v12 = s.n_red - 1
    v34 = s.n_blue // 2 - 1
    if v34 < 1 or v12 < 1:
        raise ParameterError(f"size underflow: |V1|=|V2|={v12}, |V3|=|V4|={v34}")
    return [v12, v12, v34, v34]


def _sizes_2(s: LowerBoundSpec) -> list:
    sizes = [s.n_red // 2 - 1, s.n_blue // 2 - 1, s.n_green - 1]
    if min(sizes) < 1:
        raise ParameterError(f"size underflow: class sizes {sizes}")
    return sizes


def _blocks(sizes) -> list:
    out, start = [], 0
    for size in sizes:
        out.append(range(start, start + size))
        start += size
    return out


def construction_1_parts(s: LowerBoundSpec) -> list:
    return _blocks(_sizes_1(s))


def construction_2_parts(s: LowerBoundSpec) -> list:
    return _blocks(_sizes_2(s))


def build_construction_1(s: LowerBoundSpec, policy=Policy.ALL_RED) -> MultiColouredGraph:
    """Complete colouring on ``2 n_red + n_blue - 4`` vertices with four classes.

    V1 and V2 are red cliques, V1-V3 and V2-V4 blue, everything between
    V1 u V3 and V2 u V4 green, and V3, V4 internally red or blue by ``policy``.
    """
    policy = Policy(policy)
    V1, V2, V3, V4 = construction_1_parts(s)
    part = {}
    for idx, block in enumerate((V1, V2, V3, V4)):
        for v in block:
            part[v] = idx
    side = {0: 0, 2: 0, 1: 1, 3: 1}

    def colour(u, v):
        pu, pv = part[u], part[v]
        if side[pu] != side[pv]:
            return GREEN
        if pu == pv:
            if pu in (0, 1):
                return RED
            base = V3.start if pu == 2 else V4.start
            return policy.colour(u - base, v - base)
        return BLUE

    n = 2 * s.n_red + s.n_blue - 4
    g = MultiColouredGraph.complete(n, colour)
    assert g.is_complete()
    return g


def build_construction_2(s: LowerBoundSpec) -> MultiColouredGraph:
    """Complete colouring on ``n_red/2 + n_blue/2 + n_green - 3`` vertices with three classes.

    V1 and V1-V3 red, V2 and V2-V3 blue, V1-V2 and V3 green.
    """
    V1, V2, V3 = construction_2_parts(s)
    part = {v: i for i, block in enumerate((V1, V2, V3)) for v in block}
    table = {
        (0, 0): RED, (0, 2): RED,
        (1, 1): BLUE, (1, 2): BLUE,
        (0, 1): GREEN, (2, 2): GREEN,
    }

    def colour(u, v):
        a, b = sorted((part[u], part[v]))
        return table[(a, b)]

    n = s.n_red // 2 + s.n_blue // 2 + s.n_green - 3
    g = MultiColouredGraph.complete(n, colour)
    assert g.is_complete()
    return g


# -- planted structure generators -------------------------------------------

def _int_size(x, name) -> int:
    if x != int(x) or int(x) < 1:
        raise ParameterError(f"{name} must be a positive integer size, got {x!r}")
    return int(x)


def _layout(sizes: dict, rng: random.Random) -> dict:
    n = sum(sizes.values())
    order = list(range(n))
    rng.shuffle(order)
    parts, start = {}, 0
    for lab, size in sizes.items():
        parts[lab] = frozenset(order[start:start + size])
        start += size
    return parts


def _thin(g, witness, deletions: int, rng: random.Random):
    """Delete up to ``deletions`` random edges, keeping the witness valid."""
    pairs = sorted(g.edges)
    rng.shuffle(pairs)
    removed = 0
    for pair in pairs:
        if removed >= deletions:
            break
        trial = g.with_edges({pair: None})
        if verify_witness(trial, witness).ok:
            g = trial
            removed += 1
    return g


def gen_H(x1, x2, c1=0, c2=0, gamma1=RED, gamma2=BLUE, seed=0, deletions=0):
    """A planted member of class H: X1 in gamma1, X1-X2 in gamma2.

    Pairs inside X2 are unconstrained and get a random non-empty subset of
    the two colours. Returns ``(graph, witness)``.
    """
    a, b = _int_size(x1, "x1"), _int_size(x2, "x2")
    gamma1, gamma2 = Colour.parse(gamma1), Colour.parse(gamma2)
    if gamma1 == gamma2:
        raise ParameterError("gamma1 and gamma2 must differ")
    if Fraction(c1) < 0 or not 0 <= Fraction(c2) <= 1:
        raise ParameterError("need c1 >= 0 and 0 <= c2 <= 1")
    rng = random.Random(seed)
    parts = _layout({"X1": a, "X2": b}, rng)
    X1 = parts["X1"]
    choices = [frozenset([gamma1]), frozenset([gamma2]), frozenset([gamma1, gamma2])]
    edges = {}
    for v in range(a + b):
        for u in range(v):
            inside = (u in X1) + (v in X1)
            if inside == 2:
                edges[(u, v)] = frozenset([gamma1])
            elif inside == 1:
                edges[(u, v)] = frozenset([gamma2])
            else:
                edges[(u, v)] = rng.choice(choices)
    g = MultiColouredGraph(a + b, edges)
    w = StructureWitness("H", parts, HParams(a, b, c1, c2, gamma1, gamma2))
    g = _thin(g, w, deletions, rng)
    assert verify_witness(g, w).ok
    return g, w


def _planted(sizes: dict, rules: dict, n_rng: random.Random):
    parts = _layout(sizes, n_rng)
    label = {v: lab for lab, vs in parts.items() for v in vs}
    n = sum(sizes.values())
    edges = {}
    for v in range(n):
        for u in range(v):
            key = (label[u], label[v])
            need = rules.get(key, rules.get(key[::-1]))
            edges[(u, v)] = frozenset([need]) if need else frozenset([n_rng.choice(COLOURS)])
    return MultiColouredGraph(n, edges), parts


def gen_K(x1, x2, x3, c=0, seed=0, deletions=0):
    """A planted member of class K: X1-X3 red, X2-X3 blue, inside X3 green."""
    sizes = {"X1": _int_size(x1, "x1"), "X2": _int_size(x2, "x2"), "X3": _int_size(x3, "x3")}
    if Fraction(c) < 0:
        raise ParameterError("c must be non-negative")
    rng = random.Random(seed)
    g, parts = _planted(sizes, KParams.rules, rng)
    w = StructureWitness("K", parts, KParams(sizes["X1"], sizes["X2"], sizes["X3"], c))
    g = _thin(g, w, deletions, rng)
    assert verify_witness(g, w).ok
    return g, w


def gen_Kstar(x1, x2, y1, y2, z, c=0, seed=0, deletions=0):
    """A planted member of class K*; Y1 is enlarged if ``y1 + y2 < z``."""
    sizes = {"X1": _int_size(x1, "x1"), "X2": _int_size(x2, "x2"),
             "Y1": _int_size(y1, "y1"), "Y2": _int_size(y2, "y2")}
    if z != int(z) or z < 0:
        raise ParameterError("z must be a non-negative integer")
    if Fraction(c) < 0:
        raise ParameterError("c must be non-negative")
    sizes["Y1"] += max(0, int(z) - sizes["Y1"] - sizes["Y2"])
    rng = random.Random(seed)
    g, parts = _planted(sizes, KstarParams.rules, rng)
    w = StructureWitness("Kstar", parts, KstarParams(sizes["X1"], sizes["X2"], y1, y2, z, c))
    g = _thin(g, w, deletions, rng)
    assert verify_witness(g, w).ok
    return g, w
