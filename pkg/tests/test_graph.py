from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from zeroext.fixtures import complete, cycle, fixture, hypercube, path, random_tree, star
from zeroext.graph import (
    Graph,
    GraphError,
    gate,
    is_convex,
    is_convex_by_definition,
    is_frame,
    is_modular,
    isometric_cycles,
    medians,
    metric_interval,
    shortest_path_metric,
    unit_metric,
)


def test_shortest_paths_small():
    assert shortest_path_metric(path(2))[0, 1] == 1
    assert shortest_path_metric(path(3))[0, 2] == 2


def test_weighted_c4_both_sides():
    g = Graph(4, [(0, 1, 1), (1, 2, 3), (2, 3, 1), (3, 0, 3)])
    assert shortest_path_metric(g)[0, 2] == 4


def test_rational_weights_exact():
    g = Graph(3, [(0, 1, Fraction(1, 3)), (1, 2, Fraction(1, 6))])
    assert shortest_path_metric(g)[0, 2] == Fraction(1, 2)


def test_disconnected_raises():
    with pytest.raises(GraphError, match="graph not connected"):
        shortest_path_metric(Graph(3, [(0, 1)]))


@pytest.mark.parametrize(
    "edges, message",
    [([(0, 0)], "loop"), ([(0, 5)], "range"), ([(0, 1), (1, 0)], "parallel"), ([(0, 1, 0)], "positive")],
)
def test_graph_validation(edges, message):
    with pytest.raises(GraphError, match=message):
        Graph(3, edges)


def test_intervals():
    d = unit_metric(cycle(4))
    assert metric_interval(d, 0, 1) == {0, 1}
    assert metric_interval(d, 0, 2) == {0, 1, 2, 3}
    assert metric_interval(unit_metric(path(3)), 0, 2) == {0, 1, 2}


def test_medians():
    assert medians(unit_metric(star(3)), 1, 2, 3) == {0}
    assert medians(unit_metric(cycle(6)), 0, 2, 4) == set()
    assert medians(unit_metric(cycle(4)), 0, 1, 3) == {0}
    assert medians(unit_metric(cycle(4)), 2, 2, 0) == {2}


def test_modularity():
    assert is_modular(random_tree(8, __import__("random").Random(3)))
    assert not is_modular(complete(3))
    res = is_modular(cycle(6))
    assert not res and res.witness == (0, 2, 4)
    assert is_modular(hypercube(3)) and is_modular(fixture("K33"))


def test_convexity():
    c4 = cycle(4)
    assert is_convex(c4, {0, 1})
    assert not is_convex(c4, {0, 2})
    q3 = hypercube(3)
    for face in ({0, 1, 2, 3}, {0, 1, 4, 5}, {0, 2, 4, 6}, {4, 5, 6, 7}):
        assert is_convex(q3, face)
    with pytest.raises(GraphError, match="convexity test requires modular graph"):
        is_convex(cycle(6), {0, 1})


def test_convexity_matches_definition_exhaustively():
    for g in (cycle(4), hypercube(3), fixture("grid2x3"), star(3)):
        for r in range(1, g.n + 1):
            for Y in combinations(range(g.n), r):
                assert is_convex(g, set(Y)) == is_convex_by_definition(g, set(Y))


def test_gates():
    assert gate(path(3), {0}, 2) == 0
    q3 = hypercube(3)
    bottom = {0, 1, 2, 3}
    for v in bottom:
        assert gate(q3, bottom, v) == v
        assert gate(q3, bottom, v | 4) == v


def test_gate_needs_convex_set():
    with pytest.raises(GraphError):
        gate(cycle(4), {0, 2}, 1)


def test_frames():
    assert is_frame(path(2))
    res = is_frame(cycle(6))
    assert not res and res.witness[0] == "isometric cycle"
    assert is_frame(cycle(4)) and is_frame(fixture("grid2x3"))
    assert not is_frame(complete(3))


def test_cube_is_not_a_frame():
    # the cube has isometric hexagons, so it falls outside the frame class
    res = is_frame(hypercube(3))
    assert not res
    kind, cyc = res.witness
    assert kind == "isometric cycle" and len(cyc) == 6
    assert (0, 1, 3, 7, 6, 4) in isometric_cycles(hypercube(3))


def test_quadrangle_condition_on_modular_fixtures():
    for name in ("C4", "Q3", "grid2x3", "K33", "K13"):
        g = fixture(name)
        d = unit_metric(g)
        for p in range(g.n):
            for q in range(g.n):
                nbrs = [x for x in g.adj[p] if d[x, q] == d[p, q] - 1]
                for p1, p2 in combinations(nbrs, 2):
                    assert any(
                        d[p, q] == 2 + d[z, q] for z in g.adj[p1] if g.has_edge(z, p2)
                    ), (name, p, q, p1, p2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10**6), st.lists(st.integers(1, 9), min_size=9, max_size=9))
def test_tree_metric_is_a_metric_and_median(n, seed, ws):
    import random

    t = random_tree(n, random.Random(seed))
    g = t.with_weights({e: Fraction(ws[i], 1 + i % 3) for i, e in enumerate(t.edges)})
    d = shortest_path_metric(g)
    assert d.triangle_violation() is None
    assert is_modular(g)
    for x, y, z in combinations(range(n), 3):
        assert len(medians(unit_metric(g), x, y, z)) == 1
