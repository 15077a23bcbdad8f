"""Membership in the structure classes H, K and K*.

A witness is a labelled partition of the vertex set plus the class
parameters; :func:`verify_witness` checks every clause and reports which ones
fail, :func:`detect_structure` searches for a witness.

Clause tags used in reports:

* ``partition`` - parts overlap or miss vertices
* ``size:<part>`` - a part (or ``Y1+Y2``) is below its floor
* ``almost-complete`` - the graph is not c-almost-complete
* H only: ``a:complete``, ``a:sparse``, ``b:complete``, ``b:sparse``
* K / K*: ``exclusive:<A>-<B>`` - a present edge between (or inside) the named
  parts does not carry exactly the required single colour
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ParameterError
from .graphcore import (
    BLUE,
    GREEN,
    RED,
    Colour,
    MultiColouredGraph,
    is_almost_complete,
    is_fraction_complete,
    is_sparse,
)
from .reports import Report

EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class HParams:
    x1: object
    x2: object
    c1: object
    c2: object
    gamma1: Colour = RED
    gamma2: Colour = BLUE

    labels = ("X1", "X2")
    tag = "H"


@dataclass(frozen=True)
class KParams:
    x1: object
    x2: object
    x3: object
    c: object

    labels = ("X1", "X2", "X3")
    tag = "K"
    rules = {("X1", "X3"): RED, ("X2", "X3"): BLUE, ("X3", "X3"): GREEN}


@dataclass(frozen=True)
class KstarParams:
    x1: object
    x2: object
    y1: object
    y2: object
    z: object
    c: object

    labels = ("X1", "X2", "Y1", "Y2")
    tag = "Kstar"
    rules = {
        ("X1", "Y1"): RED, ("X2", "Y2"): RED,
        ("X1", "Y2"): BLUE, ("X2", "Y1"): BLUE,
        ("X1", "X2"): GREEN, ("Y1", "Y2"): GREEN,
    }


CLASS_PARAMS = {"H": HParams, "K": KParams, "Kstar": KstarParams}


def make_params(class_tag: str, **kwargs):
    try:
        cls = CLASS_PARAMS[class_tag]
    except KeyError:
        raise ParameterError(f"unknown class {class_tag!r}") from None
    return cls(**kwargs)


@dataclass(frozen=True)
class StructureWitness:
    class_tag: str
    parts: dict
    params: object

    def __post_init__(self):
        object.__setattr__(self, "parts", {k: frozenset(v) for k, v in self.parts.items()})

    def __hash__(self):
        return hash((self.class_tag, tuple(sorted((k, tuple(sorted(v))) for k, v in self.parts.items()))))

    def labelling(self, n: int) -> tuple:
        index = {v: i for i, lab in enumerate(self.params.labels) for v in self.parts.get(lab, ())}
        return tuple(index.get(v, -1) for v in range(n))


def _floor(x) -> int:
    """Smallest integer size meeting ``|X| >= x``."""
    return max(0, math.ceil(x if isinstance(x, float) else Fraction(x)))


def size_floors(params) -> dict:
    if isinstance(params, HParams):
        return {"X1": _floor(params.x1), "X2": _floor(params.x2)}
    if isinstance(params, KParams):
        return {"X1": _floor(params.x1), "X2": _floor(params.x2), "X3": _floor(params.x3)}
    return {"X1": _floor(params.x1), "X2": _floor(params.x2), "Y1": _floor(params.y1), "Y2": _floor(params.y2)}


def _two_coloured_part(g: MultiColouredGraph, keep) -> MultiColouredGraph:
    """Spanning subgraph keeping only the colours in ``keep``."""
    edges = {}
    for pair, cols in g.edges.items():
        kept = cols & keep
        if kept:
            edges[pair] = kept
    return MultiColouredGraph(g.n_vertices, edges)


def _check_sizes(rep, parts, params):
    for lab, floor in size_floors(params).items():
        if len(parts.get(lab, ())) < floor:
            rep.add(f"size:{lab}", f"|{lab}| = {len(parts.get(lab, ()))} < {floor}")
    if isinstance(params, KstarParams):
        total = len(parts.get("Y1", ())) + len(parts.get("Y2", ()))
        if total < params.z:
            rep.add("size:Y1+Y2", f"|Y1| + |Y2| = {total} < {params.z}")


def _check_exclusive(rep, g, parts, rules):
    for (a, b), colour in rules.items():
        want = frozenset([colour])
        bad = None
        A, B = sorted(parts.get(a, ())), sorted(parts.get(b, ()))
        for u in A:
            for v in B:
                if u == v or (a == b and v < u):
                    continue
                cols = g.colours(u, v)
                if cols and cols != want:
                    bad = (u, v, cols)
                    break
            if bad:
                break
        if bad:
            u, v, cols = bad
            names = "".join(c.letter for c in sorted(cols))
            rep.add(f"exclusive:{a}-{b}", f"edge {u}-{v} has colours {names}, needs {colour.letter}")


def verify_witness(g: MultiColouredGraph, w: StructureWitness) -> Report:
    """Check every clause of the witness's class definition exactly."""
    rep = Report()
    params = w.params
    parts = w.parts
    labels = params.labels
    unknown = set(parts) - set(labels)
    everything = frozenset(range(g.n_vertices))
    union = frozenset().union(*parts.values()) if parts else frozenset()
    overlapping = sum(len(p) for p in parts.values()) != len(union)
    if unknown or overlapping or union != everything:
        rep.add("partition", "parts must partition the vertex set using labels " + ",".join(labels))
    _check_sizes(rep, parts, params)

    if isinstance(params, HParams):
        h = _two_coloured_part(g, {params.gamma1, params.gamma2})
        if not is_almost_complete(h, Fraction(params.c1)):
            rep.add("almost-complete", f"not {params.c1}-almost-complete")
        X1, X2 = parts.get("X1", frozenset()), parts.get("X2", frozenset())
        h1, h2 = h.slice(params.gamma1), h.slice(params.gamma2)
        c2 = Fraction(params.c2)
        if not is_fraction_complete(h1, c2, within=X1):
            rep.add("a:complete", f"H1[X1] is not (1 - {c2})-complete")
        if not is_sparse(h2, c2, within=X1):
            rep.add("a:sparse", f"H2[X1] is not {c2}-sparse")
        if not is_fraction_complete(h2, c2, parts=(X1, X2)):
            rep.add("b:complete", f"H2[X1, X2] is not (1 - {c2})-complete")
        if not is_sparse(h1, c2, parts=(X1, X2)):
            rep.add("b:sparse", f"H1[X1, X2] is not {c2}-sparse")
        return rep

    if not is_almost_complete(g, Fraction(params.c)):
        rep.add("almost-complete", f"not {params.c}-almost-complete")
    _check_exclusive(rep, g, parts, params.rules)
    return rep


# -- detection --------------------------------------------------------------

def _witness_from_labels(params, labels) -> StructureWitness:
    parts = {lab: frozenset(v for v, l in enumerate(labels) if l == i) for i, lab in enumerate(params.labels)}
    return StructureWitness(params.tag, parts, params)


def _pair_table(g, params):
    """forbidden[u][v] = label pairs (label_u, label_v) that edge uv would violate."""
    n = g.n_vertices
    L = len(params.labels)
    idx = {lab: i for i, lab in enumerate(params.labels)}
    rule = {}
    for (a, b), colour in params.rules.items():
        rule[(idx[a], idx[b])] = colour
        rule[(idx[b], idx[a])] = colour
    forbidden = [[frozenset()] * n for _ in range(n)]
    for (u, v), cols in g.edges.items():
        bad = set()
        for la in range(L):
            for lb in range(L):
                need = rule.get((la, lb))
                if need is not None and cols != frozenset([need]):
                    bad.add((la, lb))
        forbidden[u][v] = frozenset(bad)
        forbidden[v][u] = frozenset((b, a) for a, b in bad)
    return forbidden


def _exhaustive_pairwise(g, params) -> Optional[StructureWitness]:
    n = g.n_vertices
    L = len(params.labels)
    floors = [size_floors(params)[lab] for lab in params.labels]
    forbidden = _pair_table(g, params)
    labels = [0] * n
    counts = [0] * L
    z = getattr(params, "z", None)
    z_floor = None if z is None else _floor(z)

    def deficit():
        d = sum(max(0, f - c) for f, c in zip(floors, counts))
        if z_floor is not None:
            y_need = max(floors[2] - counts[2], 0) + max(floors[3] - counts[3], 0)
            d = d - y_need + max(y_need, z_floor - counts[2] - counts[3])
        return d

    def rec(v):
        if deficit() > n - v:
            return False
        if v == n:
            return True
        for lab in range(L):
            if any((labels[u], lab) in forbidden[u][v] for u in range(v)):
                continue
            labels[v] = lab
            counts[lab] += 1
            if rec(v + 1):
                return True
            counts[lab] -= 1
        return False

    if rec(0):
        return _witness_from_labels(params, labels)
    return None


def _exhaustive_h(g, params) -> Optional[StructureWitness]:
    for labels in itertools.product(range(2), repeat=g.n_vertices):
        w = _witness_from_labels(params, labels)
        if verify_witness(g, w).ok:
            return w
    return None


def _violation_score(g, params, labels, forbidden) -> int:
    w = _witness_from_labels(params, labels)
    rep = verify_witness(g, w)
    score = 10 * len(rep.violations)
    if forbidden is None:
        return score
    for (u, v) in g.edges:
        if (labels[u], labels[v]) in forbidden[u][v]:
            score += 1
    return score


def _seed_labels(g, params, rng) -> list:
    """Initial labelling from each vertex's monochromatic degree profile."""
    n = g.n_vertices
    deg = {c: [g.slice(c).degree(v) for v in range(n)] for c in (RED, BLUE, GREEN)}
    if isinstance(params, HParams):
        a = deg[params.gamma1]
        b = deg[params.gamma2]
        return [0 if a[v] >= b[v] else 1 for v in range(n)]
    if isinstance(params, KParams):
        return [2 if deg[GREEN][v] >= max(deg[RED][v], deg[BLUE][v]) else (0 if deg[RED][v] >= deg[BLUE][v] else 1)
                for v in range(n)]
    return [rng.randrange(4) for _ in range(n)]


def _heuristic(g, params, seed: int, restarts: int = 8, max_rounds: int = 200) -> Optional[StructureWitness]:
    """Local search over labellings; sound (only verified witnesses) but incomplete."""
    rng = random.Random(seed)
    n = g.n_vertices
    L = len(params.labels)
    forbidden = None if isinstance(params, HParams) else _pair_table(g, params)
    for attempt in range(restarts):
        labels = _seed_labels(g, params, rng) if attempt == 0 else [rng.randrange(L) for _ in range(n)]
        score = _violation_score(g, params, labels, forbidden)
        for _ in range(max_rounds):
            if score == 0:
                break
            best = (score, None, None)
            for v in range(n):
                old = labels[v]
                for lab in range(L):
                    if lab == old:
                        continue
                    labels[v] = lab
                    s = _violation_score(g, params, labels, forbidden)
                    if s < best[0]:
                        best = (s, v, lab)
                labels[v] = old
            if best[1] is None:
                break
            score, v, lab = best
            labels[v] = lab
        w = _witness_from_labels(params, labels)
        if verify_witness(g, w).ok:
            return w
    return None


def detect_structure(g: MultiColouredGraph, class_tag: str, params, *, seed: int = 0,
                     exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> Optional[StructureWitness]:
    """Find a witness for membership in the class, or None.

    Exhaustive (and returning the lexicographically least labelling) up to
    ``exhaustive_limit`` vertices; a seeded local search above that.
    """
    if isinstance(params, dict):
        params = make_params(class_tag, **params)
    if params.tag != class_tag:
        raise ParameterError(f"parameters are for class {params.tag}, not {class_tag}")
    if g.n_vertices <= exhaustive_limit:
        if isinstance(params, HParams):
            h = _two_coloured_part(g, {params.gamma1, params.gamma2})
            if not is_almost_complete(h, Fraction(params.c1)):
                return None
            w = _exhaustive_h(g, params)
        else:
            if not is_almost_complete(g, Fraction(params.c)):
                return None
            w = _exhaustive_pairwise(g, params)
    else:
        w = _heuristic(g, params, seed)
    if w is not None:
        rep = verify_witness(g, w)
        assert rep.ok, rep.violations
    return w


# -- parameter adapter for the stability outcomes ---------------------------

def stability_class_params(alpha1, alpha2, alpha3, eta, k) -> dict:
    """Instantiate the classes named by the connected-matching stability outcomes.

    Roots of eta make these thresholds irrational, so they are floats.
    """
    a1, a2, a3, eta, k = (float(x) for x in (alpha1, alpha2, alpha3, eta, k))
    r32, r2 = eta ** (1 / 32), eta ** 0.5
    return {
        "H1": HParams((a1 - 2 * r32) * k, (a2 / 2 - 2 * r32) * k, 3 * eta ** 4 * k, r32, RED, BLUE),
        "H2": HParams((a2 - 2 * r32) * k, (a1 / 2 - 2 * r32) * k, 3 * eta ** 4 * k, r32, BLUE, RED),
        "K": KParams((a1 / 2 - 14000 * r2) * k, (a2 / 2 - 14000 * r2) * k, (a3 - 68000 * r2) * k, 4 * eta ** 4 * k),
        "Kstar1": KstarParams((a1 / 2 - 97 * r2) * k, (a1 / 2 - 97 * r2) * k, (a1 / 2 + 102 * r2) * k,
                              (a1 / 2 + 102 * r2) * k, (a3 - 10 * r2) * k, 4 * eta ** 4 * k),
        "Kstar2": KstarParams((a1 / 2 - 97 * r2) * k, (a2 / 2 - 97 * r2) * k, (3 * a3 / 4 - 140 * r2) * k,
                              100 * r2 * k, (a3 - 10 * r2) * k, 4 * eta ** 4 * k),
    }
