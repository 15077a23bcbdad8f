"""Regular pairs, reduced graphs and the blow-up of connected matchings into cycles.

Partitions are inputs here; nothing in this module searches for a regular
partition. All densities are exact fractions.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cyclefind import CycleCertificate, PathCertificate
from .errors import (
    BudgetExceeded,
    GraphFormatError,
    HeaderError,
    ParameterError,
    ParityError,
    PreconditionError,
    SizeCapError,
    VertexRangeError,
)
from .graphcore import COLOURS, Colour, MultiColouredGraph, iter_bits, lowest_bit, popcount, to_mask
from .matchfind import ConnectedMatching

EXHAUSTIVE_CAP = 12


def _frac(x, name) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name} is not a number: {x!r}") from exc


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _ge_root(x, coef, eps: Fraction, k) -> bool:
    """``x >= coef * sqrt(eps) * k`` decided exactly (coef, k >= 0)."""
    x = Fraction(x)
    return x >= 0 and x * x >= Fraction(coef) ** 2 * eps * Fraction(k) ** 2


def _slice_adj(g, colour) -> tuple:
    if colour is None:
        return g.adj
    return g.colour_adj(Colour.parse(colour))


# -- partitions -------------------------------------------------------------

@dataclass(frozen=True)
class ClusterPartition:
    """An exceptional set plus equal-size clusters."""

    v0: frozenset
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "v0", frozenset(self.v0))
        object.__setattr__(self, "classes", tuple(tuple(sorted(c)) for c in self.classes))

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def cluster_size(self) -> int:
        return len(self.classes[0]) if self.classes else 0

    def problems(self, n_vertices: int, eps=None) -> list:
        out = []
        if not self.classes:
            out.append("no clusters")
        if len({len(c) for c in self.classes}) > 1:
            out.append("clusters differ in size")
        if any(len(c) == 0 for c in self.classes):
            out.append("empty cluster")
        seen = set(self.v0)
        for c in self.classes:
            if seen & set(c):
                out.append("parts overlap")
                break
            seen |= set(c)
        if seen != set(range(n_vertices)):
            out.append("parts do not cover the vertex set")
        if eps is not None and len(self.v0) > _frac(eps, "eps") * n_vertices:
            out.append(f"|V0|={len(self.v0)} exceeds eps*|V|")
        return out

    def validate(self, n_vertices: int, eps=None) -> "ClusterPartition":
        bad = self.problems(n_vertices, eps)
        if bad:
            raise PreconditionError("invalid partition: " + "; ".join(bad))
        return self


def read_partition(data) -> ClusterPartition:
    """Parse ``K``, then the V0 line (possibly empty), then K cluster lines."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.splitlines()
    if not lines or not lines[0].strip().isdigit():
        raise HeaderError("first line must be the cluster count", 1)
    k = int(lines[0])
    if len(lines) < k + 2:
        raise GraphFormatError(f"expected {k + 2} lines, found {len(lines)}", len(lines))

    def ids(i):
        try:
            vs = [int(t) for t in lines[i].split()]
        except ValueError as exc:
            raise GraphFormatError("vertex ids must be integers", i + 1) from exc
        if any(v < 0 for v in vs):
            raise VertexRangeError("negative vertex id", i + 1)
        return vs

    return ClusterPartition(ids(1), [ids(i) for i in range(2, k + 2)])


def write_partition(p: ClusterPartition) -> bytes:
    rows = [str(p.k), " ".join(map(str, sorted(p.v0)))]
    rows += [" ".join(map(str, c)) for c in p.classes]
    return ("\n".join(rows) + "\n").encode("utf-8")


# -- regularity -------------------------------------------------------------

@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    deviation: Fraction
    witness: Optional[tuple]
    density: Fraction
    tentative: bool = False

    def __bool__(self):
        return self.regular


def _best_for_subset(adj, a_mask: int, a_size: int, B: Sequence[int], b_floor: int, d: Fraction):
    """Largest deviation over all B' of size >= b_floor for a fixed A'.

    For a fixed size s the extreme densities come from the s vertices of B with
    the most (or fewest) neighbours in A', so only those need testing.
    """
    degs = sorted((popcount(adj[b] & a_mask), b) for b in B)
    high = sorted(degs, key=lambda t: (-t[0], t[1]))
    best = None
    for order in (high, degs):
        total = 0
        for s, (deg, _) in enumerate(order, 1):
            total += deg
            if s < b_floor:
                continue
            dev = abs(Fraction(total, a_size * s) - d)
            if best is None or dev > best[0]:
                best = (dev, tuple(sorted(b for _, b in order[:s])))
    return best


def check_regular_pair(g, colour, A, B, eps, mode: str = "exhaustive", *, seed: int = 0,
                       samples: int = 256) -> RegularityResult:
    """Test whether (A, B) is eps-regular in the given colour slice.

    ``exhaustive`` tries every admissible A' and is exact; it refuses clusters
    above size 12. ``heuristic`` samples A' and is one-sided: an irregular
    verdict carries a witness, a regular verdict is tentative unless the pair
    is complete or empty.
    """
    eps = _frac(eps, "eps")
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise ParameterError("A and B must be non-empty")
    if set(A) & set(B):
        raise ParameterError("A and B must be disjoint")
    if mode not in ("exhaustive", "heuristic"):
        raise ParameterError(f"unknown mode {mode!r}")
    adj = _slice_adj(g, colour)
    a_mask = to_mask(A)
    e = sum(popcount(adj[b] & a_mask) for b in B)
    d = Fraction(e, len(A) * len(B))
    a_floor = max(1, _ceil(eps * len(A)))
    b_floor = max(1, _ceil(eps * len(B)))

    def result(best, tentative):
        dev, wa, wb = best
        return RegularityResult(dev < eps, dev, (wa, wb), d, tentative and dev < eps)

    if mode == "exhaustive":
        if max(len(A), len(B)) > EXHAUSTIVE_CAP:
            raise SizeCapError(f"exhaustive regularity check is capped at {EXHAUSTIVE_CAP} vertices per side")
        best = None
        for size in range(a_floor, len(A) + 1):
            for sub in itertools.combinations(A, size):
                dev, wb = _best_for_subset(adj, to_mask(sub), size, B, b_floor, d)
                cand = (dev, sub, wb)
                if best is None or dev > best[0] or (dev == best[0] and (sub, wb) < best[1:]):
                    best = cand
        return result(best, False)

    if e in (0, len(A) * len(B)):
        return RegularityResult(True, Fraction(0), (tuple(A), tuple(B)), d, False)
    rng = random.Random(seed)
    by_deg = sorted(A, key=lambda a: (popcount(adj[a] & to_mask(B)), a))
    candidates = [tuple(by_deg[:a_floor]), tuple(by_deg[-a_floor:]), tuple(A)]
    for _ in range(samples):
        size = rng.randint(a_floor, min(len(A), a_floor + 2 * a_floor))
        candidates.append(tuple(sorted(rng.sample(A, size))))
    best = None
    for sub in candidates:
        sub = tuple(sorted(sub))
        dev, wb = _best_for_subset(adj, to_mask(sub), len(sub), B, b_floor, d)
        if best is None or dev > best[0]:
            best = (dev, sub, wb)
    return result(best, True)


# -- reduced graph ----------------------------------------------------------

@dataclass(frozen=True)
class ReducedGraph:
    base: MultiColouredGraph
    partition: ClusterPartition
    eps: Fraction
    xi: Fraction
    graph: MultiColouredGraph
    densities: dict
    regular_pairs: tuple
    tentative: bool = False
    results: dict = field(default_factory=dict, repr=False, compare=False)


def build_reduced_graph(g: MultiColouredGraph, partition: ClusterPartition, eps, xi,
                        mode: str = "exhaustive", *, seed: int = 0) -> ReducedGraph:
    """Clusters become vertices; a pair regular in every colour becomes an edge
    coloured with each colour of density at least ``xi``.

    A regular pair where no colour reaches ``xi`` has no edge (an edge needs a
    colour) but is still marked in ``regular_pairs``.
    """
    eps, xi = _frac(eps, "eps"), _frac(xi, "xi")
    if not 0 < xi <= 1:
        raise ParameterError("xi must lie in (0, 1]")
    partition.validate(g.n_vertices, eps)
    K = partition.k
    dens = {c: [[Fraction(0)] * K for _ in range(K)] for c in COLOURS}
    regular = [[False] * K for _ in range(K)]
    edges, results, tentative = {}, {}, False
    for i, j in itertools.combinations(range(K), 2):
        A, B = partition.classes[i], partition.classes[j]
        all_regular, colours = True, set()
        for c in COLOURS:
            res = check_regular_pair(g, c, A, B, eps, mode, seed=seed)
            results[(i, j, c)] = res
            dens[c][i][j] = dens[c][j][i] = res.density
            tentative |= res.tentative
            all_regular &= res.regular
            if res.density >= xi:
                colours.add(c)
        regular[i][j] = regular[j][i] = all_regular
        if all_regular and colours:
            edges[(i, j)] = frozenset(colours)
    return ReducedGraph(
        base=g, partition=partition, eps=eps, xi=xi,
        graph=MultiColouredGraph(K, edges),
        densities={c: tuple(tuple(r) for r in m) for c, m in dens.items()},
        regular_pairs=tuple(tuple(r) for r in regular),
        tentative=tentative, results=results,
    )


# -- paths inside a pair ----------------------------------------------------

def _alternating_path(adj, start: int, end: int, ell: int, free_a: int, free_b: int,
                      budget: int) -> Optional[list]:
    """Path start, b1, a1, ..., b_ell, a_ell, end with b's from ``free_b`` and
    a's from ``free_a``; ``start`` lies on the a-side, ``end`` on the b-side.

    Iterative DFS with one-step lookahead; returns None when the node budget
    runs out or the search space is exhausted.
    """
    if ell == 0:
        return [start, end] if adj[start] >> end & 1 else None
    sides = (free_b, free_a)
    total = 2 * ell
    end_nb = adj[end]
    path, used = [start], 0
    stack = [adj[start] & free_b]
    nodes = 0
    while stack:
        d = len(stack) - 1
        cand = stack[-1]
        if d == total - 1:
            cand &= end_nb
        chosen = None
        while cand:
            x = lowest_bit(cand)
            cand &= cand - 1
            nodes += 1
            if nodes > budget:
                return None
            if d == total - 1:
                chosen = x
                break
            nxt = adj[x] & sides[(d + 1) % 2] & ~used & ~(1 << x)
            if d == total - 2:
                nxt &= end_nb
            if nxt:
                chosen = x
                break
        stack[-1] = cand
        if chosen is None:
            stack.pop()
            if len(path) > 1:
                used &= ~(1 << path.pop())
            continue
        path.append(chosen)
        used |= 1 << chosen
        if d == total - 1:
            path.append(end)
            return path
        stack.append(adj[chosen] & sides[(d + 1) % 2] & ~used)
    return None


def regular_pair_path(g, colour, V1, V2, eps, ell: int, v_prime: int, v_dprime: int, k=None, *,
                      check_regular: bool = True, budget: int = 10 ** 7, seed: int = 0) -> PathCertificate:
    """A path of length ``2*ell + 1`` from ``v_prime`` in V1 to ``v_dprime`` in V2.

    Checked hypotheses (all exact): ``0 < eps < 1/600``, ``|V1|, |V2| >= k >= 1/eps``,
    ``e(V1, V2) >= sqrt(eps)|V1||V2|``, ``1 <= ell <= k - 2 sqrt(eps) k``,
    both endpoint degrees ``>= (2/3) sqrt(eps) k`` and, unless
    ``check_regular`` is off, eps-regularity of the pair (heuristic mode, so a
    non-complete pair of this size is only tentatively regular).
    """
    eps = _frac(eps, "eps")
    V1, V2 = sorted(set(V1)), sorted(set(V2))
    if not 0 < eps < Fraction(1, 600):
        raise PreconditionError("need 0 < eps < 1/600")
    if set(V1) & set(V2):
        raise PreconditionError("V1 and V2 must be disjoint")
    if k is None:
        k = min(len(V1), len(V2))
    if not (len(V1) >= k and len(V2) >= k and k * eps >= 1):
        raise PreconditionError(f"need |V1|, |V2| >= k >= 1/eps (k={k})")
    if v_prime not in V1 or v_dprime not in V2:
        raise PreconditionError("endpoints must lie in V1 and V2 respectively")
    if not 1 <= ell or not _ge_root(k - ell, 2, eps, k):
        raise PreconditionError(f"need 1 <= ell <= k - 2 sqrt(eps) k, got ell={ell}")
    adj = _slice_adj(g, colour)
    m1, m2 = to_mask(V1), to_mask(V2)
    e = sum(popcount(adj[v] & m2) for v in V1)
    if not _ge_root(e, 1, eps, len(V1) * len(V2)):
        raise PreconditionError("pair density below sqrt(eps)")
    for v, other in ((v_prime, m2), (v_dprime, m1)):
        if not _ge_root(3 * popcount(adj[v] & other), 2, eps, k):
            raise PreconditionError(f"vertex {v} has degree below (2/3) sqrt(eps) k")
    if check_regular:
        res = check_regular_pair(g, colour, V1, V2, eps, "heuristic", seed=seed)
        if not res.regular:
            raise PreconditionError(f"pair is not eps-regular (deviation {float(res.deviation):.4f})")
    free_a = m1 & ~(1 << v_prime)
    free_b = m2 & ~(1 << v_dprime)
    path = _alternating_path(adj, v_prime, v_dprime, ell, free_a, free_b, budget)
    if path is None:
        raise BudgetExceeded("no alternating path found within budget", {"ell": ell, "budget": budget})
    cert = PathCertificate(path)
    assert cert.length == 2 * ell + 1
    return cert.validate(_View(adj), v_prime, v_dprime)


@dataclass(frozen=True)
class _View:
    adj: tuple

    @property
    def n_vertices(self) -> int:
        return len(self.adj)


# -- blow-up ----------------------------------------------------------------

def _parity_walks(adj, source: int) -> dict:
    """Shortest walk from ``source`` to every (vertex, parity) state."""
    parent = {(source, 0): None}
    queue = deque([(source, 0)])
    while queue:
        v, p = queue.popleft()
        for w in iter_bits(adj[v]):
            state = (w, 1 - p)
            if state not in parent:
                parent[state] = (v, p)
                queue.append(state)
    return parent


def _walk(parent: dict, target: int, parity: int) -> Optional[list]:
    state = (target, parity)
    if state not in parent:
        return None
    out = []
    while state is not None:
        out.append(state[0])
        state = parent[state]
    return out[::-1]


def _embed_walk(adj, clusters: list, walk: list, free: int, first_key, last_key, budget: int):
    """Distinct base vertices, one per walk step, consecutive ones adjacent."""
    r = len(walk) - 1
    first = sorted(iter_bits(clusters[walk[0]] & free), key=first_key)
    chosen, used = [], 0
    stack = [iter(first)]
    nodes = 0
    while stack:
        d = len(stack) - 1
        for x in stack[-1]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("connector embedding ran out of budget", {"nodes": nodes})
            if used >> x & 1:
                continue
            if d < r:
                nxt = adj[x] & clusters[walk[d + 1]] & free & ~used & ~(1 << x)
                if not nxt:
                    continue
            break
        else:
            stack.pop()
            if chosen:
                used &= ~(1 << chosen.pop())
            continue
        chosen.append(x)
        used |= 1 << x
        if d == r:
            return chosen
        nxt = adj[x] & clusters[walk[d + 1]] & free & ~used
        order = sorted(iter_bits(nxt), key=last_key if d + 1 == r else None)
        stack.append(iter(order))
    return None


def blow_up_cycle(g: MultiColouredGraph, reduced: ReducedGraph, matching: ConnectedMatching,
                  target_len: int, parity: str = None, *, budget: int = 10 ** 6) -> CycleCertificate:
    """Turn a monochromatic connected matching of the reduced graph into a cycle
    of exactly ``target_len`` vertices in the same colour of ``g``.

    The matching edges are visited in order; consecutive ones are joined by
    connector walks in the reduced colour slice (shortest walk of the needed
    parity), each walk embedded vertex by vertex, and each matched pair is
    then padded by an alternating path inside it.
    """
    colour = Colour.parse(matching.colour)
    if parity is not None:
        want = {"even": 0, "odd": 1}.get(parity)
        if want is None:
            raise ParameterError("parity must be 'even' or 'odd'")
        if target_len % 2 != want:
            raise ParityError(f"target {target_len} is not {parity}")
    if target_len < 3:
        raise ParameterError("target length must be at least 3")
    if not matching.edges:
        raise PreconditionError("matching is empty")
    rslice = reduced.graph.slice(colour)
    matching.validate(rslice)
    radj = rslice.adj
    adj = g.colour_adj(colour)
    clusters = [to_mask(c) for c in reduced.partition.classes]
    pairs = [tuple(e) for e in matching.edges]
    t = len(pairs)

    # connector walks: from Y_i to X_{i+1}
    walks = []
    for i in range(t):
        parent = _parity_walks(radj, pairs[i][1])
        target = pairs[(i + 1) % t][0]
        walks.append([_walk(parent, target, p) for p in (0, 1)])
    choice = [min((w for w in ws if w), key=len) for ws in walks]
    base_len = t + sum(len(w) - 1 for w in choice)
    if base_len % 2 != target_len % 2:
        best = None
        for i, ws in enumerate(walks):
            other = ws[len(choice[i]) % 2]  # walk of the opposite parity
            if other is not None and (best is None or len(other) < len(best[1])):
                best = (i, other)
        if best is None:
            raise ParityError("the matching's component is bipartite; odd-parity adjustment impossible")
        choice[best[0]] = best[1]
        base_len = t + sum(len(w) - 1 for w in choice)
    if target_len < base_len:
        raise PreconditionError(f"target {target_len} shorter than the skeleton length {base_len}")

    free = to_mask(v for c in reduced.partition.classes for v in c)
    partner = {}
    for x, y in pairs:
        partner[x], partner[y] = clusters[y], clusters[x]

    def degree_key(cl):
        mask = partner.get(cl, 0)
        return lambda v: (-popcount(adj[v] & mask), v)

    connectors = []
    for i, walk in enumerate(choice):
        emb = _embed_walk(adj, clusters, walk, free, degree_key(walk[0]), degree_key(walk[-1]), budget)
        if emb is None:
            raise BudgetExceeded("could not embed a connector walk", {"walk": walk})
        connectors.append(emb)
        free &= ~to_mask(emb)

    extra = (target_len - base_len) // 2
    caps = [min(popcount(clusters[x] & free), popcount(clusters[y] & free)) for x, y in pairs]
    if extra > sum(caps):
        raise PreconditionError(f"target {target_len} exceeds the vertex budget {base_len + 2 * sum(caps)}")
    ells = []
    for cap in caps:
        take = min(cap, extra)
        ells.append(take)
        extra -= take

    cycle = []
    for i, (x, y) in enumerate(pairs):
        start = connectors[i - 1][-1]
        end = connectors[i][0]
        seg = _alternating_path(adj, start, end, ells[i], clusters[x] & free, clusters[y] & free, budget)
        if seg is None:
            raise BudgetExceeded("padding path inside a matched pair not found", {"pair": (x, y), "ell": ells[i]})
        free &= ~to_mask(seg)
        cycle.extend(seg)
        cycle.extend(connectors[i][1:-1])
    cert = CycleCertificate(cycle)
    assert cert.length == target_len, (cert.length, target_len)
    return cert.validate(g.slice(colour))
