from fractions import Fraction
from itertools import product

import pytest

from zeroext.fixtures import complete, cycle, fixture, hypercube, path, random_tree
from zeroext.graph import Graph, GraphError
from zeroext.orbits import (
    Orientation,
    compute_orbits,
    find_admissible_orientation,
    is_admissible,
    orbit_weights,
    quotient_graph,
    verify_orbit_decomposition,
)


def edge_sets(g, part):
    return sorted(sorted(g.edges[e] for e in part.members(q)) for q in range(part.orbit_count))


def test_c4_orbits():
    g = cycle(4)
    assert edge_sets(g, compute_orbits(g)) == [[(0, 1), (2, 3)], [(0, 3), (1, 2)]]


def test_tree_edges_are_singleton_orbits():
    import random

    g = random_tree(7, random.Random(1))
    assert compute_orbits(g).orbit_count == len(g.edges)


def test_cube_has_three_parallel_classes():
    g = hypercube(3)
    part = compute_orbits(g)
    assert part.orbit_count == 3
    for q in range(3):
        bits = {g.edges[e][0] ^ g.edges[e][1] for e in part.members(q)}
        assert len(bits) == 1


def test_c4_orientation_source_sink():
    g = cycle(4)
    res = find_admissible_orientation(g)
    assert res
    o = res.witness
    assert o.direction == ((0, 1), (0, 3), (1, 2), (3, 2))
    assert is_admissible(g, o)


def test_directed_cycle_is_not_admissible():
    g = cycle(4)
    assert not is_admissible(g, Orientation.from_pairs(g, [(0, 1), (1, 2), (2, 3), (3, 0)]))


def test_cube_oriented_from_corner():
    g = hypercube(3)
    o = Orientation.from_pairs(g, [(u, v) for u, v in g.edges])  # u < v means u is a subset of v
    assert is_admissible(g, o)


def test_any_tree_orientation_admissible():
    g = path(4)
    for dirs in product([0, 1], repeat=3):
        o = Orientation(g, [e if s else e[::-1] for e, s in zip(g.edges, dirs)])
        assert is_admissible(g, o)


def test_non_bipartite_is_not_orientable():
    res = find_admissible_orientation(complete(3))
    assert not res and res.witness[0] == "not bipartite"


def exhaustive_orientable(g):
    for dirs in product([0, 1], repeat=len(g.edges)):
        o = Orientation(g, [e if s else e[::-1] for e, s in zip(g.edges, dirs)])
        if is_admissible(g, o):
            return True
    return False


@pytest.mark.parametrize("name", ["K33", "C4", "C6", "K13", "P5", "grid2x3"])
def test_orientability_matches_exhaustive_search(name):
    g = fixture(name)
    assert bool(find_admissible_orientation(g)) == exhaustive_orientable(g)


def test_k33_conflict_witness_is_a_chain_of_squares():
    g = fixture("K33")
    res = find_admissible_orientation(g)
    assert not res
    kind, (arc, chain) = res.witness
    assert kind == "orientation conflict" and chain
    for cyc in chain:
        assert all(g.has_edge(cyc[i], cyc[(i + 1) % 4]) for i in range(4))


def test_quotients():
    g = cycle(4)
    qg, vmap = quotient_graph(g, {g.edge_id(0, 1), g.edge_id(2, 3)})
    assert qg.n == 2 and qg.edges == ((0, 1),)
    assert sorted(vmap.count(k) for k in (0, 1)) == [2, 2]
    t = path(4)
    assert quotient_graph(t, {1})[0].edges == ((0, 1),)
    q3 = hypercube(3)
    part = compute_orbits(q3)
    qg, _ = quotient_graph(q3, part.members(0) | part.members(1))
    assert qg.n == 4 and len(qg.edges) == 4


def test_quotient_rejects_partial_orbit():
    g = cycle(4)
    with pytest.raises(GraphError, match="not a union of orbits"):
        quotient_graph(g, {g.edge_id(0, 1)})


def test_orbit_decomposition():
    q3 = hypercube(3)
    assert verify_orbit_decomposition(q3, {0: 1, 1: 1, 2: 1})
    assert verify_orbit_decomposition(q3, {0: 2, 1: Fraction(1, 3), 2: 5})
    assert verify_orbit_decomposition(path(4), {0: 1, 1: 2, 2: 3})
    assert verify_orbit_decomposition(fixture("grid2x3"), {0: 3, 1: 1, 2: 2})


def test_orbit_weights_require_invariance():
    g = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 2), (0, 3, 1)])
    with pytest.raises(GraphError, match="orbit-invariant"):
        orbit_weights(g)
