import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import boolean_lattice, chain, diamond, fan, pentagon
from zeroext.rational import INF
from zeroext.semilattice import (
    ModularSemilattice,
    ProductSemilattice,
    SemilatticeError,
    covering_metric,
    envelope,
    explicit_product,
    fractional_join,
    interval_profile,
    is_antipodal,
    is_modular_semilattice,
    is_submodular,
    is_submodular_product_finite,
    is_valuation,
    join_if_bounded,
    maximal_extreme_chain,
    meet,
    product_fractional_join,
    submodularity_conditions,
    valuation_from_weights,
    weights_from_valuation,
)

F = Fraction


def test_meets_and_joins():
    D, Fn = diamond(), fan(2)
    assert meet(D, "0", "x") == "0" and meet(D, "x", "1") == "x"
    assert meet(Fn, "a0", "a1") == "0"
    assert meet(D, "x", "y") == "0"
    assert join_if_bounded(D, "x", "y") == "1"
    assert join_if_bounded(Fn, "a0", "a1") is None
    assert join_if_bounded(D, "x", "1") == "1"


def test_meet_requires_semilattice():
    # two maximal common lower bounds of c and d
    L = ModularSemilattice.from_covers(
        ["0", "a", "b", "c", "d"], [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")]
    )
    with pytest.raises(SemilatticeError, match="not a semilattice"):
        meet(L, "c", "d")


def test_bounded_pair_with_two_minimal_upper_bounds():
    L = ModularSemilattice.from_covers(
        ["0", "a", "b", "c", "d", "1"],
        [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d"), ("c", "1"), ("d", "1")],
    )
    with pytest.raises(SemilatticeError, match="not modular semilattice"):
        join_if_bounded(L, "a", "b")


def test_modular_semilattice_recognition():
    assert is_modular_semilattice(boolean_lattice(3))
    assert is_modular_semilattice(fan(4))
    res = is_modular_semilattice(pentagon())
    assert not res


def test_interval_profiles():
    D, Fn, C = diamond(), fan(2), chain(3)
    pts = dict(interval_profile(Fn, "a0", "a1").points)
    assert sorted(pts.values()) == [(0, 0), (0, 1), (1, 0)]
    pts = dict(interval_profile(D, "x", "y").points)
    assert sorted(pts.values()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    pts = dict(interval_profile(C, 0, 2).points)
    assert pts == {0: (0, 0), 1: (0, 1), 2: (0, 2)}


def test_envelopes():
    assert envelope(diamond(), "x", "y") == ("x", "1", "y")
    assert envelope(fan(2), "a0", "a1") == ("a0", "a1")
    assert envelope(chain(3), 0, 2) == (2,)


def test_fractional_joins():
    assert fractional_join(diamond(), "x", "y").support() == (("1", 1),)
    assert fractional_join(fan(2), "a0", "a1").terms == (("a0", F(1, 2)), ("a1", F(1, 2)))
    Fw = fan(2, [2, 5])
    assert fractional_join(Fw, "a0", "a1").terms == (("a0", F(2, 7)), ("a1", F(5, 7)))
    assert fractional_join(chain(3), 0, 2).terms == ((2, 1),)


def test_antipodality():
    assert is_antipodal(fan(2), "a0", "a1")
    assert not is_antipodal(diamond(), "x", "y")
    assert not is_antipodal(chain(3), 0, 2)


def test_submodularity_examples():
    D = diamond()
    assert is_submodular(D, {"0": 0, "1": 0, "x": 1, "y": 1})
    res = is_submodular(D, {"0": 0, "x": 0, "y": 0, "1": 1})
    assert not res and set(res.witness) == {"x", "y"}


def test_infinite_values():
    D = diamond()
    assert is_submodular(D, {"0": 0, "x": INF, "y": INF, "1": INF})
    # x and y finite but their join infinite: the join must be in the domain
    assert not is_submodular(D, {"0": 0, "x": 0, "y": 0, "1": INF})


@pytest.mark.parametrize("maker", [diamond, lambda: fan(3), lambda: boolean_lattice(3), lambda: chain(4)])
def test_distance_to_fixed_element_is_submodular(maker):
    L = maker()
    d = covering_metric(L)
    for u in range(len(L.labels)):
        assert is_submodular(L, lambda x: d[u, L.index[x]])


@pytest.mark.parametrize("maker", [diamond, lambda: fan(3), lambda: chain(3), lambda: fan(2, [1, 2])])
def test_distance_on_square_is_submodular(maker):
    L = maker()
    d = covering_metric(L)
    dist = lambda t: d[L.index[t[0]], L.index[t[1]]]
    assert is_submodular_product_finite(L, L, dist)
    assert is_submodular(ProductSemilattice([L, L]), dist)


def test_product_criterion():
    L = fan(2)
    additive = lambda t: L.valuation(t[0]) + L.valuation(t[1])
    assert is_submodular_product_finite(L, L, additive)
    d = covering_metric(L)
    neg = lambda t: -d[L.index[t[0]], L.index[t[1]]]
    assert not is_submodular_product_finite(L, L, neg)
    assert not is_submodular(ProductSemilattice([L, L]), neg)
    with pytest.raises(SemilatticeError, match="finite-valued"):
        is_submodular_product_finite(L, L, lambda t: INF)


def test_product_fractional_join_cells():
    D, Fn = diamond(), fan(2)
    assert product_fractional_join([D, D], ("x", "x"), ("y", "y")) == [(("1", "1"), 1)]
    cells = product_fractional_join([Fn, D], ("a0", "x"), ("a1", "x"))
    assert cells == [(("a0", "x"), F(1, 2)), (("a1", "x"), F(1, 2))]
    F13 = fan(2, [1, 2])  # breakpoint 1/3
    cells = product_fractional_join([F13, Fn], ("a0", "a0"), ("a1", "a1"))
    assert [c for _, c in cells] == [F(1, 3), F(1, 6), F(1, 2)]
    assert [t for t, _ in cells] == [("a0", "a0"), ("a1", "a0"), ("a1", "a1")]


def test_product_fractional_join_matches_explicit_product():
    for Ls in ([fan(2), diamond()], [fan(2, [1, 3]), fan(3)], [chain(3), fan(2)], [diamond(), diamond()]):
        P = explicit_product(Ls)
        for x, y in combinations(P.labels, 2):
            fast = sorted(product_fractional_join(Ls, x, y))
            slow = sorted((u, c) for u, c in fractional_join(P, x, y).terms if c)
            assert fast == slow, (x, y)


def _all_pairs(L):
    return combinations(L.labels, 2)


@pytest.mark.parametrize(
    "maker", [diamond, lambda: fan(3, [1, 2, 3]), lambda: boolean_lattice(3), lambda: chain(3)]
)
def test_normalization_and_envelope_structure(maker):
    L = maker()
    for p, q in _all_pairs(L):
        fj = fractional_join(L, p, q)
        assert all(c >= 0 for _, c in fj.terms) and fj.total() == 1
        I = set(L.labels[u] for u in L.interval_i(L.index[p], L.index[q]))
        assert {u for u, _ in fj.terms} <= I
        env = envelope(L, p, q)
        for s, t in zip(env, env[1:]):
            assert L.leq(meet(L, t, p), meet(L, s, p)) and L.leq(meet(L, s, q), meet(L, t, q))
            assert L.leq(s, t) or L.leq(t, s) or is_antipodal(L, s, t)


def test_breakpoints_match_cone_measure():
    # floats only as a cross-check of the exact delta formula
    for L in (fan(2, [2, 5]), boolean_lattice(3), fan(3, [1, 2, 3])):
        for p, q in _all_pairs(L):
            i, j = L.index[p], L.index[q]
            env = L.envelope_i(i, j)
            for (a, b), delta in zip(zip(env, env[1:]), L.breakpoints_i(env)):
                xa, ya = L.vector_i(a, i, j)
                xb, yb = L.vector_i(b, i, j)
                theta = math.atan2(float(xa - xb), float(yb - ya))
                geo = math.sin(theta) / (math.sin(theta) + math.cos(theta))
                assert abs(geo - float(delta)) < 1e-12


def test_extreme_chain_drops_collinear_points():
    pts = [(0, 0), (2, 0), (1, 1), (0, 2)]
    assert maximal_extreme_chain(pts, 2, 2) == [(2, 0), (0, 2)]
    pts = [(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)]
    assert maximal_extreme_chain(pts, 2, 2) == [(2, 0), (2, 1), (1, 2), (0, 2)]


def test_valuations_and_weights():
    L = diamond()
    assert is_valuation(L)
    assert set(weights_from_valuation(L).values()) == {1}
    L3 = diamond(3)
    assert valuation_from_weights(L, {c: 3 for c in L.covers()}) == {x: L3.valuation(x) for x in L.labels}
    P = ProductSemilattice([fan(2), diamond()])
    assert P.valuation(("a0", "1")) == 3
    bad = ModularSemilattice.from_covers(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
                                         {"0": 0, "x": 1, "y": 2, "1": 2})
    assert not is_valuation(bad)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=2, max_size=4), st.data())
def test_fan_pairs_are_antipodal_with_closed_form(weights, data):
    L = fan(len(weights), weights)
    i, j = data.draw(st.sampled_from(list(combinations(range(len(weights)), 2))))
    p, q = f"a{i}", f"a{j}"
    S = weights[i] + weights[j]
    assert is_antipodal(L, p, q)
    assert fractional_join(L, p, q).terms == ((p, F(weights[i], S)), (q, F(weights[j], S)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_submodularity_characterizations_agree(vals):
    L = boolean_lattice(3)
    f = dict(zip(L.labels, vals))
    direct = is_submodular(L, f, cross_check=False)
    assert direct.ok == submodularity_conditions(L, f).ok
