"""Builders for the standard small graphs used throughout the tests and CLI demos."""

from __future__ import annotations

from itertools import combinations

from .graph import Graph


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(k: int) -> Graph:
    """K_{1,k} with centre 0."""
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def complete(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def hypercube(dim: int) -> Graph:
    n = 1 << dim
    return Graph(n, [(v, v | (1 << k)) for v in range(n) for k in range(dim) if not v & (1 << k)])


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Vertex ``(a, b)`` is numbered ``a * g2.n + b``; edge weights are inherited."""
    n2 = g2.n
    edges = []
    for a in range(g1.n):
        for (u, v) in g2.edges:
            edges.append((a * n2 + u, a * n2 + v, g2.weight(u, v)))
    for (u, v) in g1.edges:
        for b in range(n2):
            edges.append((u * n2 + b, v * n2 + b, g1.weight(u, v)))
    return Graph(g1.n * n2, edges)


def grid(rows: int, cols: int) -> Graph:
    return cartesian_product(path(rows), path(cols))


def tree_from_parents(parents) -> Graph:
    """``parents[i]`` is the parent of vertex ``i + 1``."""
    return Graph(len(parents) + 1, [(p, i + 1) for i, p in enumerate(parents)])


def random_tree(n: int, rng) -> Graph:
    return tree_from_parents([rng.randrange(i + 1) for i in range(n - 1)])


FIXTURES = {
    "K2": lambda: path(2),
    "P3": lambda: path(3),
    "P5": lambda: path(5),
    "C4": lambda: cycle(4),
    "C6": lambda: cycle(6),
    "K3": lambda: complete(3),
    "K13": lambda: star(3),
    "K33": lambda: complete_bipartite(3, 3),
    "Q3": lambda: hypercube(3),
    "grid2x3": lambda: grid(2, 3),
    "K2xP3": lambda: cartesian_product(path(2), path(3)),
}


def fixture(name: str) -> Graph:
    return FIXTURES[name]()
