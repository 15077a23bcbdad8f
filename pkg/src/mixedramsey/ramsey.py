"""Closed-form cycle Ramsey values, lower-bound certification and small-N search."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cyclefind import find_cycle_exact
from .errors import BudgetExceeded, ParameterError, VerificationFailed
from .extremal import POLICIES, LowerBoundSpec, build_construction_1, build_construction_2
from .graphcore import COLOURS, MultiColouredGraph, write_graph

PROFILES = {"A": (0, 0, 1), "C": (0, 1, 1)}


def even_floor(x) -> int:
    """Largest even integer not greater than ``x`` (``x >= 2``)."""
    x = Fraction(x)
    if x < 2:
        raise ParameterError(f"even_floor needs x >= 2, got {x}")
    f = math.floor(x)
    return f - f % 2


def odd_floor(x) -> int:
    """Largest odd integer not greater than ``x`` (``x >= 1``)."""
    x = Fraction(x)
    if x < 1:
        raise ParameterError(f"odd_floor needs x >= 1, got {x}")
    f = math.floor(x)
    return f if f % 2 else f - 1


@dataclass(frozen=True)
class CycleTriple:
    """Forbidden cycle lengths per colour; ``profile`` is ``"A"``, ``"C"`` or None."""

    n_red: int
    n_blue: int
    n_green: int
    profile: Optional[str] = None

    def __post_init__(self):
        if min(self.lengths) < 3:
            raise ParameterError("cycle lengths must be at least 3")
        if self.profile is not None:
            want = PROFILES.get(self.profile)
            if want is None:
                raise ParameterError(f"unknown profile {self.profile!r}")
            if tuple(n % 2 for n in self.lengths) != want:
                names = {0: "even", 1: "odd"}
                raise ParameterError(
                    f"profile {self.profile} needs ({', '.join(names[p] for p in want)}) lengths, got {self.lengths}"
                )

    @property
    def lengths(self) -> tuple:
        return (self.n_red, self.n_blue, self.n_green)

    def with_profile(self, profile: str) -> "CycleTriple":
        return CycleTriple(self.n_red, self.n_blue, self.n_green, profile)


def theorem_A_value(t: CycleTriple) -> int:
    t = t.with_profile("A")
    if t.n_red < t.n_blue:
        raise ParameterError("the even-even-odd formula needs n_red >= n_blue")
    return max(2 * t.n_red + t.n_blue - 3, t.n_red // 2 + t.n_blue // 2 + t.n_green - 2)


def theorem_C_value(t: CycleTriple) -> int:
    t = t.with_profile("C")
    return max(4 * t.n_red, t.n_red + 2 * t.n_blue, t.n_red + 2 * t.n_green) - 3


# -- outcomes ---------------------------------------------------------------

@dataclass
class SearchOutcome:
    triple: CycleTriple
    N: int
    result: str  # "witness" or "exhausted"
    witness: Optional[MultiColouredGraph] = None
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.result == "witness"

    def stats_text(self) -> str:
        rows = [f"N={self.N}", f"result={self.result}",
                f"triple={self.triple.n_red},{self.triple.n_blue},{self.triple.n_green}"]
        rows += [f"{k}={v}" for k, v in sorted(self.stats.items())]
        return "\n".join(rows) + "\n"

    def as_dict(self) -> dict:
        out = {"N": self.N, "result": self.result, "triple": list(self.triple.lengths),
               "stats": dict(self.stats)}
        if self.witness is not None:
            out["witness"] = write_graph(self.witness).decode()
        return out


def forbidden_cycles(g: MultiColouredGraph, lengths) -> list:
    """Colours (with their cycle) in which ``g`` contains the forbidden length."""
    found = []
    for c, L in zip(COLOURS, lengths):
        if L <= g.n_vertices:
            cyc = find_cycle_exact(g.slice(c), L)
            if cyc is not None:
                found.append((c, cyc))
    return found


def verify_avoiding(g: MultiColouredGraph, t: CycleTriple) -> None:
    if not g.is_complete():
        raise VerificationFailed("witness is not a complete colouring")
    bad = forbidden_cycles(g, t.lengths)
    if bad:
        c, cyc = bad[0]
        raise VerificationFailed(f"witness contains a {c.name.lower()} C{cyc.length}: {cyc.vertices}")


def certify_lower_bound(t: CycleTriple) -> SearchOutcome:
    """Build both extremal colourings (every V3/V4 policy), check each avoids
    the three forbidden cycles, and return the larger one."""
    t = t.with_profile("A")
    target = theorem_A_value(t) - 1
    spec = LowerBoundSpec(t.n_red, t.n_blue, t.n_green)
    checked = []
    for policy in POLICIES:
        g = build_construction_1(spec, policy)
        verify_avoiding(g, t)
        checked.append((g.n_vertices, f"lb1:{policy.value}", g))
    g2 = build_construction_2(spec)
    verify_avoiding(g2, t)
    checked.append((g2.n_vertices, "lb2", g2))
    size, name, best = max(checked, key=lambda item: item[0])
    if size != target:
        raise VerificationFailed(f"largest construction has {size} vertices, expected {target}")
    stats = {"constructions_checked": len(checked), "source": name,
             "lb1_vertices": checked[0][0], "lb2_vertices": g2.n_vertices}
    return SearchOutcome(t, size, "witness", best, stats)


# -- exhaustive search ------------------------------------------------------

def _path_exists(adj, start: int, end: int, n_vertices: int) -> bool:
    """A path from start to end on exactly ``n_vertices`` vertices."""
    if n_vertices == 3:
        return bool(adj[start] & adj[end])
    end_bit = 1 << end

    def dfs(v, visited, remaining):
        if remaining == 2:
            return bool(adj[v] & adj[end] & ~visited)
        cand = adj[v] & ~visited & ~end_bit
        while cand:
            low = cand & -cand
            cand ^= low
            if dfs(low.bit_length() - 1, visited | low, remaining - 1):
                return True
        return False

    return dfs(start, (1 << start) | end_bit, n_vertices - 1)


class _Search:
    def __init__(self, lengths, N, symmetry, budget):
        self.lengths = lengths
        self.N = N
        self.symmetry = symmetry
        self.budget = budget
        self.edges = [(u, v) for v in range(1, N) for u in range(v)]
        self.adj = [[0] * N for _ in range(3)]
        self.colour = {}
        self.nodes = 0
        self.prunes = {"cycle:red": 0, "cycle:blue": 0, "cycle:green": 0, "symmetry": 0}
        # colours with equal length are interchangeable
        self.swappable = [[a for a in range(c) if lengths[a] == lengths[c]] for c in range(3)]
        self.row0 = [0, 0, 0]

    def allowed(self, idx: int, c: int) -> bool:
        u, v = self.edges[idx]
        if self.symmetry and u == 0:
            if v > 1 and c < self.colour[(0, v - 1)]:
                return False
            for a in self.swappable[c]:
                if self.row0[c] + 1 > self.row0[a]:
                    return False
        return True

    def closes_cycle(self, u, v, c) -> bool:
        L = self.lengths[c]
        if L > self.N:
            return False
        return _path_exists(self.adj[c], u, v, L)

    def assign(self, idx, c):
        u, v = self.edges[idx]
        self.colour[(u, v)] = c
        self.adj[c][u] |= 1 << v
        self.adj[c][v] |= 1 << u
        if u == 0:
            self.row0[c] += 1

    def unassign(self, idx, c):
        u, v = self.edges[idx]
        del self.colour[(u, v)]
        self.adj[c][u] &= ~(1 << v)
        self.adj[c][v] &= ~(1 << u)
        if u == 0:
            self.row0[c] -= 1

    def options(self, idx):
        """Colours that survive symmetry and cycle pruning at edge ``idx``."""
        u, v = self.edges[idx]
        out = []
        for c in range(3):
            if not self.allowed(idx, c):
                self.prunes["symmetry"] += 1
                continue
            if self.closes_cycle(u, v, c):
                self.prunes[f"cycle:{('red', 'blue', 'green')[c]}"] += 1
                continue
            out.append(c)
        return out

    def run(self, start: int = 0) -> Optional[dict]:
        """Depth-first completion from edge ``start``; None means exhausted."""
        if start == len(self.edges):
            return dict(self.colour)
        stack = [(start, iter(self.options(start)))]
        current = []
        while stack:
            idx, it = stack[-1]
            if current and len(current) == len(stack):
                self.unassign(idx, current.pop())
            c = next(it, None)
            if c is None:
                stack.pop()
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded("search budget exhausted", self.stats())
            self.assign(idx, c)
            current.append(c)
            if idx + 1 == len(self.edges):
                return dict(self.colour)
            stack.append((idx + 1, iter(self.options(idx + 1))))
        return None

    def stats(self) -> dict:
        out = {"nodes": self.nodes, "edges": len(self.edges)}
        out.update({f"prune:{k}": v for k, v in self.prunes.items()})
        return out


def _prefixes(lengths, N, symmetry, depth):
    """All surviving colourings of the first ``depth`` edges, in search order."""
    s = _Search(lengths, N, symmetry, float("inf"))
    depth = min(depth, len(s.edges))
    out = []

    def rec(idx):
        if idx == depth:
            out.append([s.colour[e] for e in s.edges[:depth]])
            return
        for c in s.options(idx):
            s.assign(idx, c)
            rec(idx + 1)
            s.unassign(idx, c)

    rec(0)
    return out, s.stats()


def _run_prefix(args):
    lengths, N, symmetry, budget, prefix = args
    s = _Search(lengths, N, symmetry, budget)
    for idx, c in enumerate(prefix):
        s.assign(idx, c)
    try:
        found = s.run(len(prefix))
    except BudgetExceeded:
        return "budget", None, s.stats()
    return ("witness" if found is not None else "exhausted"), found, s.stats()


def _to_graph(N, colouring) -> MultiColouredGraph:
    return MultiColouredGraph(N, {e: frozenset([COLOURS[c]]) for e, c in colouring.items()})


def search_ramsey(t: CycleTriple, N: int, budget: int = 10 ** 7, *, symmetry: bool = True,
                  threads: int = 1, split_depth: int = 6) -> SearchOutcome:
    """Decide whether K_N has a 3-colouring avoiding the three forbidden cycles.

    Edges are coloured in vertex-extension order and every assignment is
    rejected if it closes a monochromatic cycle of the forbidden length through
    the new edge. Symmetry breaking (sound under vertex and colour relabelling):
    vertex 0's row is non-decreasing in colour order, and among colours of
    equal length the earlier colour is used at least as often at vertex 0.

    ``exhausted`` proves R > N is false (every colouring contains a forbidden
    cycle); ``witness`` proves R > N. Running out of ``budget`` nodes raises
    :class:`BudgetExceeded` with the partial stats.
    """
    if N < 1:
        raise ParameterError("N must be positive")
    lengths = t.lengths
    if threads <= 1:
        s = _Search(lengths, N, symmetry, budget)
        found = s.run(0)
        stats = s.stats()
    else:
        prefixes, pre_stats = _prefixes(lengths, N, symmetry, split_depth)
        jobs = [(lengths, N, symmetry, budget, p) for p in prefixes]
        found, total = None, {"nodes": len(prefixes)}
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for status, colouring, st in pool.map(_run_prefix, jobs, chunksize=1):
                for k, v in st.items():
                    if k != "edges":
                        total[k] = total.get(k, 0) + v
                if total["nodes"] > budget or status == "budget":
                    pool.shutdown(cancel_futures=True)
                    raise BudgetExceeded("search budget exhausted", total)
                if status == "witness":
                    found = colouring
                    pool.shutdown(cancel_futures=True)
                    break
        for k, v in pre_stats.items():
            if k.startswith("prune:"):
                total[k] = total.get(k, 0) + v
        total["edges"] = N * (N - 1) // 2
        total["prefixes"] = len(prefixes)
        stats = total
    if found is None:
        return SearchOutcome(t, N, "exhausted", None, stats)
    g = _to_graph(N, found)
    verify_avoiding(g, t)
    return SearchOutcome(t, N, "witness", g, stats)


# -- stability side conditions ----------------------------------------------

@dataclass(frozen=True)
class Parameters:
    alpha1: Fraction
    alpha2: Fraction
    alpha3: Fraction
    eta: Fraction

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3", "eta"):
            value = Fraction(getattr(self, name))
            if value <= 0:
                raise ParameterError(f"{name} must be positive")
            object.__setattr__(self, name, value)


def _le_root(x: Fraction, coef: int, eta: Fraction, power: int = 2) -> bool:
    """``x <= coef * eta**(1/power)``, exact."""
    return x <= 0 or x ** power <= coef ** power * eta


def theorem_B_side_conditions(p: Parameters, k=None) -> dict:
    """Which structural outcomes the stability theorem's side conditions permit."""
    if p.alpha1 < p.alpha2:
        raise ParameterError("need alpha1 >= alpha2")
    a1, a2, a3, eta = p.alpha1, p.alpha2, p.alpha3, p.eta
    c = max(2 * a1 + a2, a1 / 2 + a2 / 2 + a3)
    pivot = Fraction(3, 2) * a1 + a2 / 2
    iv = _le_root(a3 - pivot, 14, eta)
    v_vi = _le_root(pivot - a3, 10, eta)
    out = {
        "c": c,
        "K_window": (c - eta, c - eta / 2),
        "iv": iv,
        "v": v_vi,
        "vi": v_vi,
        "iv_H2_allowed": _le_root(a1 - a2, 1, eta, 16),
    }
    if k is not None:
        out["K_range"] = (math.ceil((c - eta) * k), math.floor((c - eta / 2) * k))
    return out
