"""Modular complexes: oriented modular graphs with orbit-invariant edge lengths.

Provides the induced partial order, Boolean pairs, the local semilattices on either
side of a vertex, the 2-subdivision and its neighborhood semilattices, the Lovasz-type
restriction of vertex functions, and the L-convexity test.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import NamedTuple

from .fixtures import cartesian_product
from .graph import Graph, GraphError, Verdict, is_modular, mask_members, shortest_path_metric
from .orbits import (
    Orientation,
    compute_orbits,
    find_admissible_orientation,
    is_admissible,
    orbit_weights,
)
from .rational import as_fraction
from .semilattice import ModularSemilattice, ProductSemilattice, is_submodular


class BooleanPair(NamedTuple):
    """The Boolean pair written ``high/low`` (``low`` below ``high``)."""

    low: int
    high: int

    def __str__(self):
        return f"{self.high}/{self.low}"


class ModularComplex:
    """``(graph, orientation, weights)``: the weights are the graph's edge weights.

    With ``orientation=None`` the canonical admissible orientation is used. ``check``
    validates modularity, admissibility and orbit invariance (skip only for inputs
    already known to be valid, such as internally built subdivisions).
    """

    def __init__(self, graph: Graph, orientation: Orientation = None, check: bool = True):
        if orientation is None:
            found = find_admissible_orientation(graph)
            if not found:
                raise GraphError(f"graph is not orientable: {found.witness}")
            orientation = found.witness
        if check:
            if not graph.is_connected:
                raise GraphError("graph not connected")
            mod = is_modular(graph)
            if not mod:
                raise GraphError(f"graph is not modular (median-free triple {mod.witness})")
            if not is_admissible(graph, orientation):
                raise GraphError("orientation is not admissible")
            orbit_weights(graph)
        self.graph = graph
        self.orientation = orientation
        self.n = graph.n
        self._boolean = {}
        self._local = {}
        self._star = {}

    def __repr__(self):
        return f"ModularComplex(n={self.n}, m={len(self.graph.edges)})"

    @classmethod
    def from_orbit_weights(cls, graph: Graph, h, orientation=None) -> "ModularComplex":
        from .orbits import weights_from_orbit_values

        return cls(graph.with_weights(weights_from_orbit_values(graph, h)), orientation)

    def with_unit_weights(self) -> "ModularComplex":
        if self.graph.is_unit:
            return self
        g = self.graph.unit()
        return ModularComplex(g, Orientation(g, self.orientation.direction), check=False)

    @cached_property
    def dist(self):
        return shortest_path_metric(self.graph)

    @cached_property
    def orbits(self):
        return compute_orbits(self.graph)

    # -- order ------------------------------------------------------------------

    @cached_property
    def _reach(self) -> tuple:
        order = self.orientation.topological_order()
        if order is None:
            raise GraphError("orientation has a directed cycle")
        succ = self.orientation.successors()
        up = [0] * self.n
        for v in reversed(order):
            m = 1 << v
            for w in succ[v]:
                m |= up[w]
            up[v] = m
        down = [0] * self.n
        for v in range(self.n):
            for w in mask_members(up[v]):
                down[w] |= 1 << v
        return tuple(up), tuple(down)

    @property
    def up(self) -> tuple:
        return self._reach[0]

    @property
    def down(self) -> tuple:
        return self._reach[1]

    def leq(self, p: int, q: int) -> bool:
        return bool(self.up[p] >> q & 1)

    def order_interval(self, p: int, q: int) -> list:
        return mask_members(self.up[p] & self.down[q])

    # -- Boolean pairs ----------------------------------------------------------

    def is_boolean_pair(self, p: int, q: int) -> bool:
        """``(p, q)`` is Boolean iff ``p <= q`` and ``[p, q]`` is a complemented lattice."""
        key = (p, q)
        if key not in self._boolean:
            self._boolean[key] = self._complemented_interval(p, q)
        return self._boolean[key]

    def _complemented_interval(self, p: int, q: int) -> bool:
        if p == q:
            return True
        if not self.leq(p, q):
            return False
        box = self.up[p] & self.down[q]
        elems = mask_members(box)
        up, down = self.up, self.down

        def extreme(mask, cone):
            for x in mask_members(mask):
                if mask & ~cone[x] == 0:
                    return x
            return None

        for u in elems:
            for w in elems:
                lo = extreme(down[u] & down[w] & box, down)
                hi = extreme(up[u] & up[w] & box, up)
                if lo is None or hi is None:
                    return False
                if lo == p and hi == q:
                    break
            else:
                return False
        return True

    @cached_property
    def boolean_pairs(self) -> tuple:
        return tuple(
            BooleanPair(p, q)
            for p in range(self.n)
            for q in mask_members(self.up[p])
            if self.is_boolean_pair(p, q)
        )

    # -- local semilattices -----------------------------------------------------

    def local_semilattice(self, p: int, side: str = "+") -> ModularSemilattice:
        """``L+_p`` (Boolean pairs above ``p``) or ``L-_p`` (below, order reversed).

        Labels are vertex ids; the valuation is ``d(q, p)``.
        """
        key = (p, side)
        L = self._local.get(key)
        if L is None:
            if side == "+":
                elems = [q for q in mask_members(self.up[p]) if self.is_boolean_pair(p, q)]
                leq = self.leq
            elif side == "-":
                elems = [q for q in mask_members(self.down[p]) if self.is_boolean_pair(q, p)]
                leq = lambda a, b: self.leq(b, a)
            else:
                raise ValueError("side must be '+' or '-'")
            d = self.dist
            L = ModularSemilattice(elems, leq, lambda q: d[q, p])
            self._local[key] = L
        return L

    # -- 2-subdivision ----------------------------------------------------------

    @cached_property
    def subdivision(self) -> "Subdivision":
        return two_subdivision(self)

    def neighborhood_semilattice(self, p: int) -> ModularSemilattice:
        """``L*_p``: the upper local semilattice of ``p/p`` in the 2-subdivision.

        Labels are :class:`BooleanPair` values of this complex; the valuation is the
        subdivision distance to ``p/p``.
        """
        L = self._star.get(p)
        if L is None:
            sub = self.subdivision
            base = sub.index[BooleanPair(p, p)]
            Ls = sub.complex.local_semilattice(base, "+")
            pairs = sub.pairs
            L = ModularSemilattice(
                [pairs[i] for i in Ls.labels],
                lambda a, b: Ls.leq(sub.index[a], sub.index[b]),
                lambda a: Ls.valuation(sub.index[a]),
            )
            self._star[p] = L
        return L


class Subdivision(NamedTuple):
    """The 2-subdivision complex plus the Boolean pair behind each of its vertices."""

    complex: ModularComplex
    pairs: tuple
    index: dict


def order_from_orientation(c: ModularComplex) -> tuple:
    """Up-set bitmasks of the reachability order (raises on a directed cycle)."""
    return c.up


def is_boolean_pair(c: ModularComplex, p: int, q: int) -> bool:
    return c.is_boolean_pair(p, q)


def local_semilattice(c: ModularComplex, p: int, side: str = "+") -> ModularSemilattice:
    return c.local_semilattice(p, side)


def neighborhood_semilattice(c: ModularComplex, p: int) -> ModularSemilattice:
    return c.neighborhood_semilattice(p)


def two_subdivision(c: ModularComplex, check: bool = False) -> Subdivision:
    """Graph on Boolean pairs, half edge lengths, orientation with ``p/p`` minimal.

    ``q/p ~ q'/p`` when ``qq'`` is an edge (oriented as ``q -> q'``), and
    ``q/p ~ q/p'`` when ``pp'`` is an edge (oriented against ``p' -> p``).
    """
    g, o = c.graph, c.orientation
    pairs = tuple(sorted(c.boolean_pairs))
    index = {bp: i for i, bp in enumerate(pairs)}
    edges = []
    arcs = []
    for (t, h) in o.direction:
        w = g.weight(t, h) / 2
        for bp in pairs:
            low, high = bp
            if high == t and (low, h) in index:
                a, b = index[bp], index[BooleanPair(low, h)]
                edges.append((a, b, w))
                arcs.append((a, b))
            if low == h and (t, high) in index:
                # t -> h in the graph gives high/h -> high/t in the subdivision
                a, b = index[bp], index[BooleanPair(t, high)]
                edges.append((a, b, w))
                arcs.append((a, b))
    star = Graph(len(pairs), edges)
    sub = ModularComplex(star, Orientation.from_pairs(star, arcs), check=check)
    return Subdivision(sub, pairs, index)


def lovasz_restriction(c: ModularComplex, g) -> dict:
    """``gbar(q/p) = (g(p) + g(q)) / 2`` on every Boolean pair."""
    getg = g if callable(g) else g.__getitem__
    return {bp: (as_fraction(getg(bp.low)) + as_fraction(getg(bp.high))) / 2 for bp in c.boolean_pairs}


def is_L_convex(c: ModularComplex, g) -> Verdict:
    """``gbar`` restricted to every neighborhood semilattice is submodular.

    The witness is ``(vertex, violating pair)``.
    """
    getg = g if callable(g) else g.__getitem__
    for p in range(c.n):
        L = c.neighborhood_semilattice(p)
        f = lambda bp: (as_fraction(getg(bp.low)) + as_fraction(getg(bp.high))) / 2
        res = is_submodular(L, f, cross_check=False)
        if not res:
            return Verdict(False, (p, res.witness))
    return Verdict(True)


def is_L_convex_product(factors, g, vertices=None) -> Verdict:
    """L-convexity of ``g`` on the product of the complexes ``factors``.

    Uses the factorization of neighborhood semilattices of a product into the
    product of the factors' neighborhood semilattices, so the product complex is
    never built. ``g`` takes a tuple of vertices; ``vertices`` restricts the check.
    """
    factors = list(factors)
    cache = {}
    if vertices is None:
        vertices = product(*[range(fc.n) for fc in factors])
    for rho in vertices:
        key = tuple(rho)
        P = cache.get(key)
        if P is None:
            P = ProductSemilattice([fc.neighborhood_semilattice(r) for fc, r in zip(factors, key)])
            cache[key] = P

        def f(tup):
            lows = tuple(bp.low for bp in tup)
            highs = tuple(bp.high for bp in tup)
            return (as_fraction(g(lows)) + as_fraction(g(highs))) / 2

        res = is_submodular(P, f, cross_check=False)
        if not res:
            return Verdict(False, (key, res.witness))
    return Verdict(True)


def restrict_to_orbit(c: ModularComplex, L: ModularSemilattice, orbit: int) -> tuple:
    """``L|Q``: elements reached from the minimum along covers lying in orbit ``Q``.

    ``L`` must be a local semilattice of ``c`` (labels are vertices). Returns the
    restricted semilattice and the gate map ``p -> p|Q``.
    """
    g = c.graph
    orbit_of = c.orbits.orbit_of
    covers = L.covers()
    below = {x: [] for x in L.labels}
    for a, b in covers:
        if not g.has_edge(a, b):
            raise GraphError(f"cover {(a, b)} is not an edge of the complex")
        below[b].append(a)
    reach = {}
    order = sorted(L.labels, key=L.valuation)
    for x in order:
        if x == L.bottom:
            reach[x] = True
        else:
            reach[x] = any(reach[a] and orbit_of[g.edge_id(a, x)] == orbit for a in below[x])
    members = [x for x in L.labels if reach[x]]
    R = ModularSemilattice(members, L.leq, L.valuation)
    gates = {}
    for p in L.labels:
        cands = [
            y for y in members
            if all(L.distance(p, z) == L.distance(p, y) + L.distance(y, z) for z in members)
        ]
        if len(cands) != 1:
            raise GraphError(f"no unique gate for {p} at the orbit restriction")
        gates[p] = cands[0]
    return R, gates


def product_complex(c1: ModularComplex, c2: ModularComplex) -> ModularComplex:
    """Cartesian product with product orientation and inherited lengths.

    Vertex ``(a, b)`` is numbered ``a * c2.n + b``.
    """
    g = cartesian_product(c1.graph, c2.graph)
    n2 = c2.n
    arcs = []
    for a in range(c1.n):
        for (t, h) in c2.orientation.direction:
            arcs.append((a * n2 + t, a * n2 + h))
    for (t, h) in c1.orientation.direction:
        for b in range(n2):
            arcs.append((t * n2 + b, h * n2 + b))
    return ModularComplex(g, Orientation.from_pairs(g, arcs))
