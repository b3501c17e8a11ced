"""Projectivity orbits, admissible orientations, quotient graphs and the orbit split of distances.

Arcs are encoded as ``2 * edge_id + s`` where ``s = 0`` means the arc runs from the
lower to the higher endpoint of the edge; ``arc ^ 1`` is the reverse arc.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .graph import Graph, GraphError, Verdict, shortest_path_metric, unit_metric
from .rational import as_fraction


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def arc_of(g: Graph, tail: int, head: int) -> int:
    e = g.edge_id(tail, head)
    return 2 * e + (0 if tail < head else 1)


def arc_ends(g: Graph, arc: int) -> tuple:
    u, v = g.edges[arc >> 1]
    return (u, v) if arc & 1 == 0 else (v, u)


@lru_cache(maxsize=256)
def aligned_arc_pairs(g: Graph) -> tuple:
    """Pairs of parallel arcs on opposite edges of 4-cycles, with the cycle.

    For a 4-cycle ``a-b-d-c-a`` the edges ``ab`` and ``cd`` are opposite and the
    arcs ``a->b`` and ``c->d`` must point the same way in an admissible orientation.
    """
    out = []
    edges = g.edges
    has = g.has_edge
    for i, (a, b) in enumerate(edges):
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if len({a, b, c, d}) < 4:
                continue
            if has(a, c) and has(b, d):
                out.append((arc_of(g, a, b), arc_of(g, c, d), (a, b, d, c)))
            if has(a, d) and has(b, c):
                out.append((arc_of(g, a, b), arc_of(g, d, c), (a, b, c, d)))
    return tuple(out)


def four_cycles(g: Graph) -> list:
    return sorted({tuple(sorted(cyc)) for _, _, cyc in aligned_arc_pairs(g)})


class OrbitPartition(NamedTuple):
    """``orbit_of[e]`` is the orbit id of edge ``e``; ids follow the smallest member edge."""

    orbit_of: tuple
    orbit_count: int

    def members(self, orbit: int) -> frozenset:
        return frozenset(e for e, o in enumerate(self.orbit_of) if o == orbit)

    def orbits(self) -> list:
        return [self.members(q) for q in range(self.orbit_count)]


def compute_orbits(g: Graph) -> OrbitPartition:
    uf = UnionFind(len(g.edges))
    for a1, a2, _ in aligned_arc_pairs(g):
        uf.union(a1 >> 1, a2 >> 1)
    ids = {}
    orbit_of = []
    for e in range(len(g.edges)):
        r = uf.find(e)
        if r not in ids:
            ids[r] = len(ids)
        orbit_of.append(ids[r])
    return OrbitPartition(tuple(orbit_of), len(ids))


class Orientation:
    """An orientation of every edge, stored as ``(tail, head)`` per edge id."""

    def __init__(self, g: Graph, directions):
        directions = tuple(tuple(d) for d in directions)
        if len(directions) != len(g.edges):
            raise GraphError("orientation must orient every edge")
        for (u, v), (t, h) in zip(g.edges, directions):
            if {t, h} != {u, v}:
                raise GraphError(f"direction {(t, h)} does not match edge {(u, v)}")
        self.graph = g
        self.direction = directions

    @classmethod
    def from_arcs(cls, g: Graph, arcs) -> "Orientation":
        dirs = [None] * len(g.edges)
        for a in arcs:
            dirs[a >> 1] = arc_ends(g, a)
        return cls(g, dirs)

    @classmethod
    def from_pairs(cls, g: Graph, pairs) -> "Orientation":
        dirs = [None] * len(g.edges)
        for t, h in pairs:
            dirs[g.edge_id(t, h)] = (t, h)
        return cls(g, dirs)

    def __eq__(self, other):
        return isinstance(other, Orientation) and self.direction == other.direction

    def __hash__(self):
        return hash(self.direction)

    def __repr__(self):
        return f"Orientation({list(self.direction)})"

    def arcs(self) -> list:
        return [arc_of(self.graph, t, h) for t, h in self.direction]

    def points_up(self, u: int, v: int) -> bool:
        """True iff the edge ``uv`` is oriented ``u -> v``."""
        return self.direction[self.graph.edge_id(u, v)] == (u, v)

    def successors(self) -> tuple:
        out = [[] for _ in range(self.graph.n)]
        for t, h in self.direction:
            out[t].append(h)
        return tuple(tuple(sorted(s)) for s in out)

    def topological_order(self):
        """A topological order of the vertices, or None if the digraph has a cycle."""
        n = self.graph.n
        indeg = [0] * n
        succ = self.successors()
        for t, h in self.direction:
            indeg[h] += 1
        queue = deque(v for v in range(n) if indeg[v] == 0)
        order = []
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in succ[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return order if len(order) == n else None

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None


def is_admissible(g: Graph, o: Orientation) -> bool:
    arcs = set(o.arcs())
    return all((a1 in arcs) == (a2 in arcs) for a1, a2, _ in aligned_arc_pairs(g))


def _conflict_chain(g: Graph, start: int) -> list:
    """4-cycles linking ``start`` to its own reverse arc through parallel-arc steps."""
    links = {}
    for a1, a2, cyc in aligned_arc_pairs(g):
        for x, y in ((a1, a2), (a2, a1), (a1 ^ 1, a2 ^ 1), (a2 ^ 1, a1 ^ 1)):
            links.setdefault(x, []).append((y, cyc))
    prev = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == start ^ 1:
            break
        for y, cyc in links.get(x, ()):
            if y not in prev:
                prev[y] = (x, cyc)
                queue.append(y)
    chain = []
    x = start ^ 1
    while prev[x] is not None:
        x, cyc = prev[x]
        chain.append(cyc)
    chain.reverse()
    return [arc_ends(g, start), chain]


def find_admissible_orientation(g: Graph) -> Verdict:
    """Verdict with an admissible :class:`Orientation`, or a conflict witness.

    Arcs on opposite edges of each 4-cycle are merged; the graph is orientable iff
    no arc ends up merged with its reverse. Each orbit is then oriented by the class
    of its lowest edge's lower-to-higher arc.
    """
    if not g.is_bipartite:
        return Verdict(False, ("not bipartite", _odd_cycle(g)))
    m = len(g.edges)
    uf = UnionFind(2 * m)
    for a1, a2, _ in aligned_arc_pairs(g):
        uf.union(a1, a2)
        uf.union(a1 ^ 1, a2 ^ 1)
    for a in range(2 * m):
        if uf.find(a) == uf.find(a ^ 1):
            return Verdict(False, ("orientation conflict", _conflict_chain(g, a)))
    chosen = {}
    arcs = []
    for e in range(m):
        up, down = uf.find(2 * e), uf.find(2 * e + 1)
        if up not in chosen and down not in chosen:
            chosen[up] = True
            chosen[down] = False
        arcs.append(2 * e if chosen[up] else 2 * e + 1)
    return Verdict(True, Orientation.from_arcs(g, arcs))


def _odd_cycle(g: Graph) -> list:
    d = g.hop_distance
    for u, v in g.edges:
        if d[0][u] == d[0][v]:
            pu, pv = [u], [v]
            while pu[-1] != pv[-1]:
                x, y = pu[-1], pv[-1]
                pu.append(next(w for w in g.adj[x] if d[0][w] == d[0][x] - 1))
                pv.append(next(w for w in g.adj[y] if d[0][w] == d[0][y] - 1))
            return pu + list(reversed(pv[:-1]))
    return []


def quotient_graph(g: Graph, U) -> tuple:
    """Contract every edge outside the edge-id set ``U`` (a union of orbits).

    Returns the unit-weight quotient graph and the vertex map ``p -> p/U``;
    quotient vertices are numbered by their smallest preimage.
    """
    U = frozenset(U)
    orbits = compute_orbits(g)
    touched = {orbits.orbit_of[e] for e in U}
    if any(orbits.orbit_of[e] in touched and e not in U for e in range(len(g.edges))):
        raise GraphError("edge set is not a union of orbits")
    uf = UnionFind(g.n)
    for e, (u, v) in enumerate(g.edges):
        if e not in U:
            uf.union(u, v)
    label = {}
    vmap = []
    for v in range(g.n):
        r = uf.find(v)
        if r not in label:
            label[r] = len(label)
        vmap.append(label[r])
    qedges = set()
    for e in U:
        u, v = g.edges[e]
        a, b = vmap[u], vmap[v]
        if a == b:
            raise GraphError(f"edge {g.edges[e]} collapses to a loop in the quotient")
        qedges.add((min(a, b), max(a, b)))
    return Graph(len(label), sorted(qedges)), tuple(vmap)


def orbit_weights(g: Graph) -> dict:
    """Orbit id -> weight for an orbit-invariant weighted graph."""
    orbits = compute_orbits(g)
    h = {}
    for e, q in enumerate(orbits.orbit_of):
        w = g.weight(*g.edges[e])
        if h.setdefault(q, w) != w:
            raise GraphError(f"weights are not orbit-invariant on orbit {q}")
    return h


def is_orbit_invariant(g: Graph) -> bool:
    try:
        orbit_weights(g)
    except GraphError:
        return False
    return True


def weights_from_orbit_values(g: Graph, h) -> dict:
    orbits = compute_orbits(g)
    out = {}
    for e, q in enumerate(orbits.orbit_of):
        w = as_fraction(h[q])
        if w <= 0:
            raise GraphError("orbit weights must be positive")
        out[g.edges[e]] = w
    return out


def verify_orbit_decomposition(g: Graph, h) -> bool:
    """``d_{g,h}(p, q) == sum_Q h_Q * d_{g/Q}(p/Q, q/Q)`` for all pairs."""
    weighted = shortest_path_metric(g.with_weights(weights_from_orbit_values(g, h)))
    orbits = compute_orbits(g)
    parts = []
    for q in range(orbits.orbit_count):
        qg, vmap = quotient_graph(g, orbits.members(q))
        parts.append((as_fraction(h[q]), unit_metric(qg), vmap))
    for p in range(g.n):
        for r in range(g.n):
            total = sum((hq * dq[vmap[p], vmap[r]] for hq, dq, vmap in parts), Fraction(0))
            if total != weighted[p, r]:
                return False
    return True
