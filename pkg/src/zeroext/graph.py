"""Graphs, exact shortest-path metrics, intervals, medians, modularity and gates."""

from __future__ import annotations

import heapq
from collections import deque
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Optional

from .rational import as_fraction


class GraphError(ValueError):
    pass


class Verdict(NamedTuple):
    """Boolean answer plus an optional certificate; truthiness is ``ok``."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


class Graph:
    """Finite simple undirected graph on vertices ``0..n-1`` with positive rational edge weights.

    ``edges`` may hold pairs ``(u, v)`` or triples ``(u, v, w)``; ``weights`` (a mapping
    keyed by either orientation of an edge) overrides per-edge values. Missing weights are 1.
    Edges are stored normalized (``u < v``) and sorted; an edge's id is its index in
    :attr:`edges`.
    """

    def __init__(self, n: int, edges: Iterable = (), weights: Optional[dict] = None):
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        self.n = n
        wmap = {}
        for e in edges:
            if len(e) == 3:
                u, v, w = e
            else:
                (u, v), w = e, 1
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            key = (min(u, v), max(u, v))
            if key in wmap:
                raise GraphError(f"parallel edge {key}")
            wmap[key] = as_fraction(w)
        for (u, v), w in (weights or {}).items():
            key = (min(u, v), max(u, v))
            if key not in wmap:
                raise GraphError(f"weight given for non-edge {key}")
            wmap[key] = as_fraction(w)
        for key, w in wmap.items():
            if w <= 0:
                raise GraphError(f"nonpositive weight {w} on edge {key}")
        self.edges: tuple = tuple(sorted(wmap))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self._weights = wmap
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
            and self._weights == other._weights
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def weight(self, u: int, v: int) -> Fraction:
        return self._weights[(min(u, v), max(u, v))]

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(min(u, v), max(u, v))]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._weights

    @property
    def weights(self) -> dict:
        return dict(self._weights)

    @property
    def is_unit(self) -> bool:
        return all(w == 1 for w in self._weights.values())

    def with_weights(self, weights: dict) -> "Graph":
        return Graph(self.n, self.edges, weights)

    def unit(self) -> "Graph":
        return Graph(self.n, self.edges)

    @cached_property
    def adj_mask(self) -> tuple:
        return tuple(sum(1 << w for w in a) for a in self.adj)

    @cached_property
    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    @cached_property
    def hop_distance(self) -> tuple:
        """Unit-weight distances as a tuple of int tuples (BFS)."""
        if not self.is_connected:
            raise GraphError("graph not connected")
        rows = []
        for s in range(self.n):
            dist = [-1] * self.n
            dist[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            rows.append(tuple(dist))
        return tuple(rows)

    @cached_property
    def diameter(self) -> int:
        return max(max(row) for row in self.hop_distance)

    @cached_property
    def bipartition(self) -> Optional[tuple]:
        """Colour classes 0/1 per vertex, or None if the graph has an odd cycle."""
        d = self.hop_distance
        colour = tuple(d[0][v] % 2 for v in range(self.n))
        for u, v in self.edges:
            if colour[u] == colour[v]:
                return None
        return colour

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None


class DistanceMatrix:
    """Symmetric exact distance table, indexable as ``d[p, q]`` or ``d(p, q)``."""

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)

    def __getitem__(self, pq):
        p, q = pq
        return self.rows[p][q]

    def __call__(self, p, q):
        return self.rows[p][q]

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"DistanceMatrix(n={self.n})"

    @cached_property
    def interval_masks(self) -> tuple:
        """``masks[p][q]`` is the bitmask of the metric interval I(p, q)."""
        n, d = self.n, self.rows
        out = []
        for p in range(n):
            row = []
            for q in range(n):
                dpq = d[p][q]
                m = 0
                for z in range(n):
                    if d[p][z] + d[z][q] == dpq:
                        m |= 1 << z
                row.append(m)
            out.append(tuple(row))
        return tuple(out)

    def triangle_violation(self) -> Optional[tuple]:
        n, d = self.n, self.rows
        for x in range(n):
            if d[x][x] != 0:
                return (x, x, x)
            for y in range(n):
                if d[x][y] != d[y][x] or (x != y and d[x][y] <= 0):
                    return (x, y, y)
                for z in range(n):
                    if d[x][y] > d[x][z] + d[z][y]:
                        return (x, y, z)
        return None


def mask_members(mask: int) -> list:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def shortest_path_metric(g: Graph) -> DistanceMatrix:
    """All-pairs weighted distances by Dijkstra over exact rationals."""
    if not g.is_connected:
        raise GraphError("graph not connected")
    if g.is_unit:
        return DistanceMatrix([[Fraction(x) for x in row] for row in g.hop_distance])
    rows = []
    for s in range(g.n):
        dist = [None] * g.n
        dist[s] = Fraction(0)
        heap = [(Fraction(0), s)]
        done = [False] * g.n
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for w in g.adj[u]:
                alt = du + g.weight(u, w)
                if dist[w] is None or alt < dist[w]:
                    dist[w] = alt
                    heapq.heappush(heap, (alt, w))
        rows.append(dist)
    return DistanceMatrix(rows)


def unit_metric(g: Graph) -> DistanceMatrix:
    return DistanceMatrix([[Fraction(x) for x in row] for row in g.hop_distance])


def metric_interval(d: DistanceMatrix, p: int, q: int) -> frozenset:
    return frozenset(mask_members(d.interval_masks[p][q]))


def medians(d: DistanceMatrix, x1: int, x2: int, x3: int) -> frozenset:
    I = d.interval_masks
    return frozenset(mask_members(I[x1][x2] & I[x2][x3] & I[x3][x1]))


def is_modular_metric(d: DistanceMatrix) -> Verdict:
    """Every triple has a median; the witness is a median-free triple."""
    I = d.interval_masks
    for x, y, z in combinations(range(d.n), 3):
        if not (I[x][y] & I[y][z] & I[z][x]):
            return Verdict(False, (x, y, z))
    return Verdict(True)


def is_modular(g: Graph) -> Verdict:
    """Modularity of ``g`` under its unit-weight metric."""
    return is_modular_metric(unit_metric(g))


def _induces_connected(g: Graph, Y) -> bool:
    Y = set(Y)
    if not Y:
        return False
    start = next(iter(Y))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w in Y and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == Y


def is_convex(g: Graph, Y) -> bool:
    """Convexity of ``Y`` in a modular graph via the distance-two interval test."""
    if not is_modular(g):
        raise GraphError("convexity test requires modular graph")
    Y = set(Y)
    if not _induces_connected(g, Y):
        return False
    d = g.hop_distance
    I = unit_metric(g).interval_masks
    ymask = sum(1 << y for y in Y)
    for p, q in combinations(sorted(Y), 2):
        if d[p][q] == 2 and I[p][q] & ~ymask:
            return False
    return True


def is_convex_by_definition(g: Graph, Y) -> bool:
    """``I(p, q)`` inside ``Y`` for every pair of ``Y``; valid for any graph."""
    Y = set(Y)
    I = unit_metric(g).interval_masks
    ymask = sum(1 << y for y in Y)
    return bool(Y) and all(not (I[p][q] & ~ymask) for p in Y for q in Y)


def gate(g: Graph, Y, p: int) -> int:
    """The unique vertex of convex ``Y`` lying on a geodesic from ``p`` to every point of ``Y``."""
    Y = sorted(set(Y))
    if not is_convex(g, Y):
        raise GraphError("gate requires a convex set")
    d = g.hop_distance
    found = [y for y in Y if all(d[p][q] == d[p][y] + d[y][q] for q in Y)]
    if len(found) != 1:
        raise GraphError(f"expected a unique gate, found {found}")
    return found[0]


def _geodesics(g: Graph, s: int, t: int) -> list:
    d = g.hop_distance
    out = []

    def walk(path):
        u = path[-1]
        if u == t:
            out.append(tuple(path))
            return
        for w in g.adj[u]:
            if d[s][w] == d[s][u] + 1 and d[w][t] == d[u][t] - 1:
                path.append(w)
                walk(path)
                path.pop()

    walk([s])
    return out


def isometric_cycles(g: Graph, min_length: int = 5) -> list:
    """Isometric even cycles of length >= ``min_length`` in a bipartite graph.

    An isometric cycle of length 2m splits at antipodal vertices ``s, t`` (with
    ``d(s, t) = m``) into two internally disjoint geodesics, so we pair geodesics
    and keep cycles whose cyclic distance matches the graph distance everywhere.
    """
    d = g.hop_distance
    found = set()
    for s in range(g.n):
        for t in range(s + 1, g.n):
            m = d[s][t]
            if 2 * m < min_length:
                continue
            paths = _geodesics(g, s, t)
            for a, b in combinations(paths, 2):
                if set(a[1:-1]) & set(b[1:-1]):
                    continue
                cyc = list(a) + list(reversed(b[1:-1]))
                L = len(cyc)
                if all(
                    d[cyc[i]][cyc[j]] == min(j - i, L - (j - i))
                    for i in range(L)
                    for j in range(i + 1, L)
                ):
                    k = cyc.index(min(cyc))
                    rot = cyc[k:] + cyc[:k]
                    if rot[1] > rot[-1]:
                        rot = [rot[0]] + rot[1:][::-1]
                    found.add(tuple(rot))
    return sorted(found)


def is_frame(g: Graph) -> Verdict:
    """Bipartite, orientable, and free of isometric cycles longer than four."""
    from .orbits import find_admissible_orientation

    if not g.is_connected:
        raise GraphError("graph not connected")
    if not g.is_bipartite:
        return Verdict(False, "not bipartite")
    cycles = isometric_cycles(g, min_length=5)
    if cycles:
        return Verdict(False, ("isometric cycle", cycles[0]))
    orient = find_admissible_orientation(g)
    if not orient:
        return Verdict(False, ("not orientable", orient.witness))
    return Verdict(True, orient.witness)
