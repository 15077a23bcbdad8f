"""Exact-length cycle search and constructive Hamiltonicity criteria.

Every public operation returns a certificate (an explicit vertex sequence)
and refuses with :class:`PreconditionError` when its hypothesis fails, so a
returned object is never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ParameterError, ParityError, PreconditionError, VerificationFailed
from .graphcore import edge_count, is_almost_complete, iter_bits, lowest_bit, popcount, to_mask

EXACT_SEARCH_LIMIT = 32


@dataclass(frozen=True)
class CycleCertificate:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def __len__(self):
        return len(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices)

    def edges(self) -> list:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def problems(self, g) -> list:
        vs = self.vertices
        out = []
        if len(vs) < 3:
            out.append("cycle shorter than 3")
        if len(set(vs)) != len(vs):
            out.append("repeated vertex")
        for u, v in self.edges():
            if not (0 <= u < g.n_vertices and g.adj[u] >> v & 1):
                out.append(f"missing edge {u}-{v}")
        return out

    def is_valid(self, g) -> bool:
        return not self.problems(g)

    def validate(self, g) -> "CycleCertificate":
        bad = self.problems(g)
        if bad:
            raise VerificationFailed(f"invalid cycle {self.vertices}: {'; '.join(bad)}")
        return self


@dataclass(frozen=True)
class PathCertificate:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def __len__(self):
        return len(self.vertices)

    @property
    def length(self) -> int:
        """Number of edges."""
        return len(self.vertices) - 1

    def problems(self, g, start=None, end=None) -> list:
        vs = self.vertices
        out = []
        if not vs:
            return ["empty path"]
        if len(set(vs)) != len(vs):
            out.append("repeated vertex")
        for u, v in zip(vs, vs[1:]):
            if not (0 <= u < g.n_vertices and g.adj[u] >> v & 1):
                out.append(f"missing edge {u}-{v}")
        if start is not None and vs[0] != start:
            out.append(f"starts at {vs[0]}, not {start}")
        if end is not None and vs[-1] != end:
            out.append(f"ends at {vs[-1]}, not {end}")
        return out

    def is_valid(self, g, start=None, end=None) -> bool:
        return not self.problems(g, start, end)

    def validate(self, g, start=None, end=None) -> "PathCertificate":
        bad = self.problems(g, start, end)
        if bad:
            raise VerificationFailed(f"invalid path {self.vertices}: {'; '.join(bad)}")
        return self


# -- structural helpers -----------------------------------------------------

def _full_mask(g) -> int:
    return (1 << g.n_vertices) - 1


def _two_core(adj, mask: int) -> int:
    changed = True
    while changed:
        changed = False
        for v in iter_bits(mask):
            if popcount(adj[v] & mask) < 2:
                mask &= ~(1 << v)
                changed = True
    return mask


def _blocks(adj, mask: int) -> list:
    """Vertex masks of the biconnected blocks (with >= 3 vertices) of ``G[mask]``."""
    index, low = {}, {}
    blocks = []
    counter = 0
    for root in iter_bits(mask):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        vstack = [root]
        frames = [(root, -1, adj[root] & mask)]
        while frames:
            v, parent, rest = frames[-1]
            if rest:
                w = lowest_bit(rest)
                frames[-1] = (v, parent, rest & (rest - 1))
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    vstack.append(w)
                    frames.append((w, v, adj[w] & mask))
                elif w != parent:
                    low[v] = min(low[v], index[w])
                continue
            frames.pop()
            if not frames:
                continue
            p = frames[-1][0]
            low[p] = min(low[p], low[v])
            if low[v] >= index[p]:
                block = 1 << p
                while True:
                    x = vstack.pop()
                    block |= 1 << x
                    if x == v:
                        break
                if popcount(block) >= 3:
                    blocks.append(block)
    return blocks


def _bipartition(adj, mask: int) -> Optional[tuple]:
    """Two-colour ``G[mask]``; returns (side0, side1) masks or None if an odd cycle exists."""
    side = {}
    s0 = s1 = 0
    for root in iter_bits(mask):
        if root in side:
            continue
        side[root] = 0
        s0 |= 1 << root
        queue = [root]
        while queue:
            v = queue.pop()
            for w in iter_bits(adj[v] & mask):
                if w not in side:
                    side[w] = 1 - side[v]
                    if side[w]:
                        s1 |= 1 << w
                    else:
                        s0 |= 1 << w
                    queue.append(w)
                elif side[w] == side[v]:
                    return None
    return s0, s1


def _greedy_independent(adj, mask: int) -> int:
    chosen = 0
    rest = mask
    while rest:
        v = min(iter_bits(rest), key=lambda x: (popcount(adj[x] & rest), x))
        chosen |= 1 << v
        rest &= ~(adj[v] | 1 << v)
    return popcount(chosen)


def _reach(adj, start: int, allowed: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _length_possible(adj, block: int, length: int) -> bool:
    size = popcount(block)
    if size < length:
        return False
    parts = _bipartition(adj, block)
    if parts is not None:
        if length % 2:
            return False
        return length <= 2 * min(popcount(parts[0]), popcount(parts[1]))
    # Every independent-set vertex on a cycle is flanked by two non-members.
    return length <= 2 * (size - _greedy_independent(adj, block))


# -- exact-length cycle search ---------------------------------------------

def _cycle_through(adj, block: int, s: int, length: int) -> Optional[list]:
    """A cycle on exactly ``length`` vertices of ``G[block]`` through ``s``."""
    path = [s]

    def dfs(end: int, visited: int) -> bool:
        depth = len(path)
        if depth == length:
            return bool(adj[end] >> s & 1)
        cand = adj[end] & block & ~visited
        if depth == length - 1:
            cand &= adj[s]
            # fix orientation: last vertex beats the second one
            if depth >= 2:
                cand &= ~((2 << path[1]) - 1)
        if not cand:
            return False
        if depth >= 2 and length - depth > 1:
            allowed = block & ~visited
            r = _reach(adj, end, allowed | 1 << s)
            if not r >> s & 1 or popcount(r & allowed) < length - depth:
                return False
        for w in iter_bits(cand):
            path.append(w)
            if dfs(w, visited | 1 << w):
                return True
            path.pop()
        return False

    return list(path) if dfs(s, 1 << s) else None


def _find_cycle_mask(adj, mask: int, length: int) -> Optional[list]:
    work = [_two_core(adj, mask)]
    while work:
        m = work.pop()
        for block in _blocks(adj, m):
            if not _length_possible(adj, block, length):
                continue
            s = lowest_bit(block)
            found = _cycle_through(adj, block, s, length)
            if found:
                return found
            rest = _two_core(adj, block & ~(1 << s))
            if popcount(rest) >= length:
                work.append(rest)
    return None


def find_cycle_exact(g, length: int, *, within: Iterable[int] = None) -> Optional[CycleCertificate]:
    """A cycle on exactly ``length`` vertices, or None if there is none.

    Complete (exhaustive) for graphs on up to 32 vertices; larger inputs are
    still searched exactly but without a runtime promise.
    """
    n = g.n_vertices
    if not 3 <= length <= max(n, 3) or length > n:
        raise ParameterError(f"cycle length {length} outside [3, {n}]")
    mask = _full_mask(g) if within is None else to_mask(within)
    found = _find_cycle_mask(g.adj, mask, length)
    return CycleCertificate(found).validate(g) if found else None


def find_path_exact(g, u: int, v: int, n_vertices: int, *, within: Iterable[int] = None) -> Optional[PathCertificate]:
    """A u-v path on exactly ``n_vertices`` vertices (DFS, exhaustive)."""
    adj = g.adj
    mask = _full_mask(g) if within is None else to_mask(within)
    if n_vertices < 2 or u == v:
        raise ParameterError("path needs two distinct endpoints and >= 2 vertices")
    path = [u]

    def dfs(end, visited):
        depth = len(path)
        if depth == n_vertices - 1:
            return bool(adj[end] >> v & 1)
        cand = adj[end] & mask & ~visited & ~(1 << v)
        if depth >= 2:
            r = _reach(adj, end, (mask & ~visited) | 1 << v)
            if not r >> v & 1 or popcount(r & mask & ~visited) < n_vertices - depth:
                return False
        for w in iter_bits(cand):
            path.append(w)
            if dfs(w, visited | 1 << w):
                return True
            path.pop()
        return False

    if dfs(u, 1 << u | 1 << v):
        return PathCertificate(path + [v]).validate(g, u, v)
    return None


# -- Dirac: rotation-extension ---------------------------------------------

def _rotation_extension(adj, mask: int) -> Optional[list]:
    """Hamiltonian cycle of ``G[mask]`` by extension and Posa-style closing.

    Succeeds whenever every closing step finds a crossing pair, which the
    Dirac condition guarantees; returns None otherwise.
    """
    n = popcount(mask)
    if n < 3:
        return None
    start = lowest_bit(mask)
    path = [start]
    inside = 1 << start
    while True:
        for _ in range(2):
            while True:
                free = adj[path[-1]] & mask & ~inside
                if not free:
                    break
                w = lowest_bit(free)
                path.append(w)
                inside |= 1 << w
            path.reverse()
        k = len(path) - 1
        first, last = path[0], path[-1]
        pivot = None
        for i in range(k):
            if adj[first] >> path[i + 1] & 1 and adj[last] >> path[i] & 1:
                pivot = i
                break
        if pivot is None:
            return None
        cycle = path[: pivot + 1] + path[pivot + 1:][::-1]
        if len(cycle) == n:
            return cycle
        for j, c in enumerate(cycle):
            outside = adj[c] & mask & ~inside
            if outside:
                w = lowest_bit(outside)
                path = [w] + cycle[j:] + cycle[:j]
                inside |= 1 << w
                break
        else:
            return None  # disconnected


def _require(cond: bool, message: str):
    if not cond:
        raise PreconditionError(message)


def _degrees(adj, mask: int) -> dict:
    return {v: popcount(adj[v] & mask) for v in iter_bits(mask)}


def dirac_hamiltonian(g, *, within: Iterable[int] = None) -> CycleCertificate:
    """Hamiltonian cycle when every degree is at least n/2."""
    mask = _full_mask(g) if within is None else to_mask(within)
    n = popcount(mask)
    _require(n >= 3, f"Dirac needs n >= 3, got {n}")
    degs = _degrees(g.adj, mask)
    low = min(degs.values())
    _require(2 * low >= n, f"minimum degree {low} < n/2 = {Fraction(n, 2)}")
    cycle = _rotation_extension(g.adj, mask)
    if cycle is None:
        raise VerificationFailed("rotation-extension failed under the Dirac condition")
    return CycleCertificate(cycle).validate(g)


def almost_complete_cycle(g, a: int, m: int) -> CycleCertificate:
    """Cycle of length exactly ``m`` in an ``a``-almost-complete graph, ``2a+2 <= m <= n``."""
    n = g.n_vertices
    if not (max(2 * a + 2, 3) <= m <= n):
        raise PreconditionError(f"need max(2a+2, 3) <= m <= n; got a={a}, m={m}, n={n}")
    _require(is_almost_complete(g, a), f"graph is not {a}-almost-complete")
    # the property is hereditary, so the first m vertices inherit it and satisfy Dirac
    return dirac_hamiltonian(g, within=range(m))


def dirac_path_between(g, u: int, v: int) -> PathCertificate:
    """Hamiltonian u-v path when every degree is at least n/2 + 1."""
    n = g.n_vertices
    _require(n >= 4, f"need n >= 4, got {n}")
    _require(u != v and 0 <= u < n and 0 <= v < n, "endpoints must be distinct vertices")
    adj = g.adj
    low = min(popcount(a) for a in adj)
    _require(2 * low >= n + 2, f"minimum degree {low} < n/2 + 1")
    if n == 4:
        rest = [w for w in range(n) if w not in (u, v)]
        return PathCertificate([u, *rest, v]).validate(g, u, v)
    # G - {u, v} still satisfies Dirac; splice u and v onto a crossing cycle edge.
    mask = _full_mask(g) & ~(1 << u | 1 << v)
    cycle = _rotation_extension(adj, mask)
    if cycle is None:
        raise VerificationFailed("no Hamiltonian cycle in G - {u, v}")
    L = len(cycle)
    for i in range(L):
        x, y = cycle[i], cycle[(i + 1) % L]
        if adj[u] >> x & 1 and adj[v] >> y & 1:
            order = [cycle[(i - j) % L] for j in range(L)]
            return PathCertificate([u, *order, v]).validate(g, u, v)
    raise VerificationFailed("no crossing edge for the u-v splice")


# -- closure-based constructions (Chvatal, Moon-Moser) ----------------------

def _closure_cycle(adj, vertices: Sequence[int], candidate_pairs, threshold: int, complete_cycle):
    """Hamiltonian cycle via closure: add non-edges with degree sum >= threshold,
    take a cycle in the (complete) closure, then undo the additions one by one.

    Returns None when the closure is not complete.
    """
    work = {v: adj[v] for v in vertices}
    deg = {v: popcount(work[v]) for v in vertices}
    pending = [(x, y) for x, y in candidate_pairs if not work[x] >> y & 1]
    added = []
    progress = True
    while progress and pending:
        progress = False
        keep = []
        for x, y in pending:
            if deg[x] + deg[y] >= threshold:
                work[x] |= 1 << y
                work[y] |= 1 << x
                deg[x] += 1
                deg[y] += 1
                added.append((x, y))
                progress = True
            else:
                keep.append((x, y))
        pending = keep
    if pending:
        return None
    cycle = complete_cycle()
    n = len(cycle)
    for x, y in reversed(added):
        work[x] &= ~(1 << y)
        work[y] &= ~(1 << x)
        pos = {v: i for i, v in enumerate(cycle)}
        i, j = pos[x], pos[y]
        if (i - j) % n == 1:
            x, y = y, x
            i, j = j, i
        if (j - i) % n != 1:
            continue  # cycle avoids xy
        # path from y round to x, i.e. p[0] = y ... p[n-1] = x
        p = [cycle[(j + t) % n] for t in range(n)]
        a, b = p[0], p[-1]
        for t in range(n - 1):
            if work[a] >> p[t + 1] & 1 and work[b] >> p[t] & 1:
                cycle = p[: t + 1] + p[t + 1:][::-1]
                break
        else:
            raise VerificationFailed("closure reversal found no crossing pair")
    return cycle


def chvatal_condition(degrees: Sequence[int]) -> bool:
    d = sorted(degrees)
    n = len(d)
    for k in range(1, n):
        if 2 * k > n:
            break
        if d[k - 1] <= k and d[n - k - 1] < n - k:
            return False
    return True


def chvatal_hamiltonian(g) -> CycleCertificate:
    """Hamiltonian cycle when the degree sequence satisfies Chvatal's condition."""
    n = g.n_vertices
    _require(n >= 3, f"need n >= 3, got {n}")
    degs = [popcount(a) for a in g.adj]
    _require(chvatal_condition(degs), "degree sequence violates Chvatal's condition")
    verts = list(range(n))
    pairs = [(x, y) for y in verts for x in range(y)]
    cycle = _closure_cycle(g.adj, verts, pairs, n, lambda: list(verts))
    if cycle is None:
        raise VerificationFailed("closure not complete under Chvatal's condition")
    return CycleCertificate(cycle).validate(g)


def moon_moser_condition(g, X, Y) -> bool:
    adj = g.adj
    mx, my = to_mask(X), to_mask(Y)
    n = len(X) + len(Y)
    for x in X:
        dx = popcount(adj[x] & my)
        for y in iter_bits(my & ~adj[x]):
            if 2 * (dx + popcount(adj[y] & mx)) < n + 2:
                return False
    return True


def _check_bipartite_parts(g, X, Y):
    X, Y = sorted(set(X)), sorted(set(Y))
    if set(X) & set(Y):
        raise ParameterError("parts overlap")
    if any(not 0 <= v < g.n_vertices for v in X + Y):
        raise ParameterError("part vertex out of range")
    return X, Y


def _bipartite_view(g, X, Y):
    """Adjacency restricted to X-Y pairs (edges inside a part are ignored)."""
    mx, my = to_mask(X), to_mask(Y)
    adj = list(g.adj)
    for x in X:
        adj[x] &= my
    for y in Y:
        adj[y] &= mx
    return adj


def moon_moser_hamiltonian(g, X, Y) -> CycleCertificate:
    """Hamiltonian cycle of the bipartite graph ``g[X, Y]`` under Moon-Moser."""
    X, Y = _check_bipartite_parts(g, X, Y)
    if len(X) != len(Y):
        raise ParameterError(f"unbalanced parts {len(X)} != {len(Y)}")
    _require(len(X) >= 2, "each part needs at least 2 vertices")
    _require(moon_moser_condition(g, X, Y), "a non-edge xy has d(x) + d(y) < n/2 + 1")
    adj = _bipartite_view(g, X, Y)
    h = len(X)
    pairs = [(x, y) for x in X for y in Y]

    def zigzag():
        out = []
        for x, y in zip(X, Y):
            out += [x, y]
        return out

    cycle = _closure_cycle(adj, X + Y, pairs, h + 1, zigzag)
    if cycle is None:
        raise VerificationFailed("bipartite closure not complete under Moon-Moser")
    return CycleCertificate(cycle).validate(g)


def balanced_bipartite_cycle(g, X, Y, a: int, m: int) -> CycleCertificate:
    """Cycle on exactly ``m`` vertices in an ``a``-almost-complete bipartite ``g[X, Y]``."""
    X, Y = _check_bipartite_parts(g, X, Y)
    if m % 2:
        raise ParityError(f"bipartite cycle length must be even, got {m}")
    if not (max(4 * a + 2, 4) <= m <= 2 * min(len(X), len(Y))):
        raise PreconditionError(f"need 4a+2 <= m <= 2 min(|X|,|Y|); a={a}, m={m}")
    _require(is_almost_complete(g, a, parts=(X, Y)), f"g[X,Y] is not {a}-almost-complete")
    h = m // 2
    return moon_moser_hamiltonian(g, X[:h], Y[:h])


def unbalanced_bipartite_spanning_path(g, X1, X2, x1: int, x2: int) -> PathCertificate:
    """An x1-x2 path alternating between parts that visits every vertex of X2.

    Needs ``|X1| > |X2| + 1`` and every X2 vertex of degree at least n/2 + 1.
    Beyond the stated ``d(x2) >= 2`` we also require that x1 and x2 have
    distinct neighbours to start and finish on (or share the only X2 vertex);
    without that no such path exists.
    """
    X1, X2 = _check_bipartite_parts(g, X1, X2)
    n = len(X1) + len(X2)
    _require(n >= 4, f"need n >= 4, got {n}")
    _require(len(X1) > len(X2) + 1, f"need |X1| > |X2| + 1, got {len(X1)}, {len(X2)}")
    _require(x1 != x2 and x1 in X1 and x2 in X1, "x1, x2 must be distinct vertices of X1")
    adj = _bipartite_view(g, X1, X2)
    for y in X2:
        _require(2 * popcount(adj[y]) >= n + 2, f"vertex {y} of X2 has degree < n/2 + 1")
    n1, n2 = adj[x1], adj[x2]
    _require(popcount(n2) >= min(2, len(X2)), "d(x2) < 2")
    first = last = None
    if len(X2) == 1:
        _require(bool(n1 & n2), "x1 and x2 have no common neighbour")
        first = last = X2[0]
    else:
        for f in iter_bits(n1):
            others = n2 & ~(1 << f)
            if others:
                first, last = f, lowest_bit(others)
                break
        _require(first is not None, "x1 and x2 have no distinct neighbours in X2")
    order = [first] + [y for y in X2 if y not in (first, last)] + ([last] if last != first else [])
    used = 1 << x1 | 1 << x2
    path = [x1, order[0]]
    for nxt in order[1:]:
        common = adj[path[-1]] & adj[nxt] & ~used
        if not common:
            raise VerificationFailed("no free common neighbour while chaining X2")
        c = lowest_bit(common)
        used |= 1 << c
        path += [c, nxt]
    path.append(x2)
    return PathCertificate(path).validate(g, x1, x2)


# -- Erdos-Gallai -----------------------------------------------------------

def erdos_gallai_threshold(m: int, n: int) -> Fraction:
    return Fraction((m - 1) * (n - 1), 2) + 1


def _edges_in(adj, mask: int) -> int:
    return sum(popcount(adj[v] & mask) for v in iter_bits(mask)) // 2


def _eg_core(adj, mask: int, m: int) -> int:
    """Shrink to a 2-connected piece keeping ``e > (m-1)(|V|-1)/2`` with min degree >= m/2."""
    while True:
        changed = True
        while changed:
            changed = False
            for v in iter_bits(mask):
                if 2 * popcount(adj[v] & mask) <= m - 1:
                    mask &= ~(1 << v)
                    changed = True
        best, best_excess = mask, None
        for block in _blocks(adj, mask):
            excess = 2 * _edges_in(adj, block) - (m - 1) * (popcount(block) - 1)
            if excess > 0 and (best_excess is None or excess > best_excess):
                best, best_excess = block, excess
        if best == mask:
            return mask
        mask = best


def _long_cycle(adj, mask: int, m: int) -> Optional[list]:
    """Some cycle on at least ``m`` vertices of ``G[mask]`` (exhaustive DFS)."""
    remaining = mask
    while popcount(remaining) >= m:
        s = lowest_bit(remaining)
        path = [s]
        pos = {s: 0}

        def dfs(end, visited):
            depth = len(path)
            back = adj[end] & visited
            if depth >= m and back >> s & 1:
                return True
            allowed = remaining & ~visited
            if depth >= 2:
                r = _reach(adj, end, allowed | 1 << s)
                if not r >> s & 1 or depth + popcount(r & allowed) < m:
                    return False
            cand = adj[end] & allowed
            for w in sorted(iter_bits(cand), key=lambda x: -popcount(adj[x] & allowed)):
                path.append(w)
                pos[w] = depth
                if dfs(w, visited | 1 << w):
                    return True
                del pos[w]
                path.pop()
            return False

        if dfs(s, 1 << s):
            return list(path)
        remaining = _two_core(adj, remaining & ~(1 << s))
    return None


def erdos_gallai_long_cycle(g, m: int) -> CycleCertificate:
    """A cycle of length at least ``m`` when ``e(g) >= (m-1)(n-1)/2 + 1``."""
    n = g.n_vertices
    if not 3 <= m <= n:
        raise PreconditionError(f"need 3 <= m <= n, got m={m}, n={n}")
    e = edge_count(g)
    _require(e >= erdos_gallai_threshold(m, n), f"{e} edges < (m-1)(n-1)/2 + 1")
    core = _eg_core(g.adj, _full_mask(g), m)
    cycle = _long_cycle(g.adj, core, m) or _long_cycle(g.adj, _full_mask(g), m)
    if cycle is None:
        raise VerificationFailed("no cycle of length >= m despite the edge bound")
    cert = CycleCertificate(cycle).validate(g)
    assert cert.length >= m
    return cert
