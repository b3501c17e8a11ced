import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zeroext.complex import ModularComplex
from zeroext.fixtures import complete, cycle, fixture, hypercube, path
from zeroext.graph import DistanceMatrix
from zeroext.properties import random_costs
from zeroext.solver import (
    LocationInstance,
    NPHard,
    SolverError,
    Tractable,
    brute_force_solve,
    build_local_instance,
    classify,
    initial_location,
    is_locally_optimal,
    is_orbit_locally_optimal,
    is_Q_locally_optimal,
    local_minimize,
    objective,
    orbit_tau,
    orbit_taus,
    scaled_solve,
    solve,
    solve_metric_relaxation,
    steepest_descent,
    support_graph,
)

F = Fraction


def k2_instance():
    # extra vertex 2 with c(0, a) = 2 and c(1, a) = 1
    return LocationInstance(ModularComplex(path(2)), 1, {(0, 2): 2, (1, 2): 1})


def test_classifier():
    k3 = classify(complete(3))
    assert isinstance(k3, NPHard) and k3.reason == "not modular"
    assert isinstance(classify(hypercube(3)), Tractable)
    c6 = classify(cycle(6))
    assert c6.reason == "not modular" and c6.witness == (0, 2, 4)
    k33 = classify(fixture("K33"))
    assert k33.reason == "not orientable"
    assert "NP-hard: not modular" in k3.describe()


def test_objective_examples():
    c = ModularComplex(path(3))
    assert objective(LocationInstance(c, 0, {(0, 2): 5}), ()) == 0
    assert objective(LocationInstance(c, 1, {(0, 3): 1, (2, 3): 1}), (1,)) == 2
    assert objective(k2_instance(), (0,)) == 1


def test_terminal_costs_are_a_separate_constant():
    inst = LocationInstance(ModularComplex(path(3)), 1, {(0, 2): 5, (0, 3): 1})
    assert inst.terminal_constant == 10
    assert scaled_solve(inst).terminal_constant == 10 and scaled_solve(inst).value == 0


def test_instance_validation():
    c = ModularComplex(path(2))
    with pytest.raises(SolverError):
        LocationInstance(c, 1, {(0, 5): 1})
    with pytest.raises(SolverError):
        LocationInstance(c, 1, {(0, 2): -1})


def test_local_instances():
    c = ModularComplex(cycle(4))
    inst = LocationInstance(c, 1, {(1, 4): 1})
    assert build_local_instance(inst, (2,), "+").domains == [(2,)]
    assert set(build_local_instance(inst, (0,), "+").domains[0]) == {0, 1, 2, 3}


def test_local_minimize_k2():
    inst = k2_instance()
    res = local_minimize(inst, (1,), "-")
    assert res.value == 1 and res.location == (0,)


def test_local_optimality_k2():
    inst = k2_instance()
    assert is_locally_optimal(inst, (0,))
    assert all(is_Q_locally_optimal(inst, (0,), q) for q in range(1))
    res = is_locally_optimal(inst, (1,))
    assert not res and res.witness == (0,)
    assert not is_orbit_locally_optimal(inst, (1,))


def test_descent_k2():
    inst = k2_instance()
    assert steepest_descent(inst, (0,)).descent_steps == 0
    rep = steepest_descent(inst, (1,))
    assert rep.descent_steps == 1 and rep.value == 1 and rep.location == (0,)


def test_scaling_edge_cases():
    c = ModularComplex(cycle(4))
    inst = LocationInstance(c, 2, {(0, 4): 1, (2, 5): 1, (4, 5): 1})
    rep = scaled_solve(inst)
    assert rep.scaling_phases == 1
    assert rep.value == steepest_descent(inst).value == brute_force_solve(inst).value
    zero = LocationInstance(c, 2, {(0, 4): 0})
    rep = scaled_solve(zero)
    assert rep.value == 0 and rep.scaling_phases == 0


def test_rational_costs_are_rescaled():
    c = ModularComplex(fixture("K13"))
    inst = LocationInstance(c, 2, {(1, 4): F(1, 3), (2, 5): F(5, 2), (4, 5): F(7, 6), (3, 4): F(1, 2)})
    assert scaled_solve(inst).value == brute_force_solve(inst).value


def test_orbit_tau():
    inst = k2_instance()
    assert orbit_tau(inst, 0) == brute_force_solve(inst).value
    c = ModularComplex(cycle(4))
    inst = LocationInstance(c, 1, {(0, 4): 3, (1, 4): 1, (2, 4): 2, (3, 4): 2})
    # orbit {01, 23} separates {0,3} from {1,2}: cut min(3+2, 1+2) = 3
    q01 = c.orbits.orbit_of[c.graph.edge_id(0, 1)]
    assert orbit_tau(inst, q01) == 3
    assert sum(orbit_taus(inst)) == brute_force_solve(inst).value


def test_relaxation_basics():
    assert solve_metric_relaxation(path(2), 0, {}) == 0
    g = path(2)
    costs = {(0, 2): 2, (1, 2): 1, (2, 3): 5, (1, 3): 3}
    inst = LocationInstance(ModularComplex(g), 2, costs)
    assert solve_metric_relaxation(g, 2, costs) == brute_force_solve(inst).value


def test_relaxation_gap_on_the_cube():
    # four pairwise-distance-2 terminals: the LP hub sits at distance 1 from all of them
    q3 = hypercube(3)
    costs = {(1, 8): 1, (2, 8): 1, (4, 8): 1, (7, 8): 1}
    assert solve_metric_relaxation(q3, 1, costs) == 4
    assert brute_force_solve(LocationInstance(ModularComplex(q3), 1, costs)).value == 6


def test_support_graphs():
    sg = support_graph(DistanceMatrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]]))
    assert sg.graph.edges == ((0, 1), (1, 2)) and sg.classification.tractable
    sg = support_graph(DistanceMatrix([[0, 5], [5, 0]]))
    assert sg.graph.weight(0, 1) == 5 and sg.classification.tractable
    sg = support_graph(DistanceMatrix([[0, 2, 2], [2, 0, 2], [2, 2, 0]]))
    assert len(sg.graph.edges) == 3 and sg.classification.reason == "not modular"
    with pytest.raises(SolverError, match="triangle"):
        support_graph(DistanceMatrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]]))


def test_brute_force_k2_is_a_cut():
    rng = random.Random(7)
    c = ModularComplex(path(2))
    for _ in range(20):
        costs = random_costs(2, 3, rng)
        inst = LocationInstance(c, 3, costs)
        # min cut: enumerate sides of the extras directly
        best = None
        for mask in range(8):
            side = [0, 1] + [(mask >> k) & 1 for k in range(3)]
            cut = sum((v for (a, b), v in costs.items() if side[a] != side[b] and b >= 2), Fraction(0))
            best = cut if best is None else min(best, cut)
        assert brute_force_solve(inst).value == best


def test_methods_agree():
    rng = random.Random(11)
    for name in ("C4", "K2xP3"):
        c = ModularComplex(fixture(name))
        inst = LocationInstance(c, 2, random_costs(c.n, 2, rng))
        values = {m: solve(inst, m).value for m in ("scaled", "descent", "blp", "brute")}
        assert len(set(values.values())) == 1, values


def test_initial_location_ties_by_id():
    inst = LocationInstance(ModularComplex(cycle(4)), 1, {(0, 4): 0})
    assert initial_location(inst) == (0,)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["P3", "C4", "K13", "grid2x3"]))
def test_weight_insensitivity(seed, name):
    rng = random.Random(seed)
    g = fixture(name)
    c1 = ModularComplex(g)
    inst = LocationInstance(c1, 2, random_costs(g.n, 2, rng))
    h = {q: rng.randint(1, 4) for q in range(c1.orbits.orbit_count)}
    ch = ModularComplex.from_orbit_weights(g, h, c1.orientation)
    weighted = inst.with_complex(ch)
    rep = scaled_solve(inst)
    assert objective(weighted, rep.location) == brute_force_solve(weighted).value
    assert scaled_solve(weighted).value == brute_force_solve(weighted).value
