"""Named property checks run by ``zeroext verify`` and by the acceptance suite."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import NamedTuple

from .complex import ModularComplex, is_L_convex_product
from .graph import Graph, is_frame, shortest_path_metric
from .orbits import orbit_weights
from .solver import (
    LocationInstance,
    build_local_instance,
    classify,
    objective,
    orbit_taus,
    scaled_solve,
    solve_metric_relaxation,
)
from .vcsp import verify_polymorphism


class PropertyResult(NamedTuple):
    ok: bool
    checked: int
    detail: object = None

    def __bool__(self):
        return self.ok


def random_costs(N: int, n: int, rng, max_cost: int = 10, density: float = 0.6) -> dict:
    """Random integer costs on terminal-extra and extra-extra pairs."""
    costs = {}
    for a in range(N + n):
        for b in range(max(a + 1, N), N + n):
            if rng.random() < density:
                costs[(a, b)] = Fraction(rng.randint(0, max_cost))
    return costs


def submodular_distance(c: ModularComplex) -> PropertyResult:
    """``d`` on ``L^s_a x L^s_b`` is submodular for every pair of vertices and both sides."""
    d = c.dist
    checked = 0
    for side in "+-":
        for a in range(c.n):
            for b in range(c.n):
                Ls = [c.local_semilattice(a, side), c.local_semilattice(b, side)]
                res = verify_polymorphism(Ls, lambda t: d[t[0], t[1]])
                checked += 1
                if not res:
                    return PropertyResult(False, checked, (side, a, b, res.witness))
    return PropertyResult(True, checked)


def orbit_additive(c: ModularComplex, rng, trials: int = 10, n: int = 2) -> PropertyResult:
    """``tau(h) == sum_Q h_Q tau_Q`` on random instances."""
    h = orbit_weights(c.graph)
    for t in range(trials):
        inst = LocationInstance(c, n, random_costs(c.n, n, rng))
        tau = scaled_solve(inst).value
        parts = orbit_taus(inst)
        total = sum((h[q] * v for q, v in enumerate(parts)), Fraction(0))
        if total != tau:
            return PropertyResult(False, t + 1, (inst.costs, tau, parts))
    return PropertyResult(True, trials)


def frame_exact(g: Graph, rng, trials: int = 30, n: int = 2) -> PropertyResult:
    """The graph is a frame and the metric relaxation is exact on random instances.

    For a non-frame the result fails with the frame witness plus any gap instances.
    """
    frame = is_frame(g)
    d = shortest_path_metric(g)
    gaps = []
    for _ in range(trials):
        costs = random_costs(g.n, n, rng)
        relax = solve_metric_relaxation(g, n, costs)
        best = _zero_extension_value(g, d, n, costs)
        if relax > best:
            raise AssertionError("relaxation above the 0-extension optimum")
        if relax != best:
            gaps.append((costs, relax, best))
    ok = bool(frame) and not gaps
    return PropertyResult(ok, trials, {"frame": frame, "gaps": gaps})


def _zero_extension_value(g, d, n, costs) -> Fraction:
    N = g.n
    best = None
    for rho in product(range(N), repeat=n):
        pos = list(range(N)) + list(rho)
        v = sum((c * d[pos[a], pos[b]] for (a, b), c in costs.items() if b >= N), Fraction(0))
        if best is None or v < best:
            best = v
    return best if best is not None else Fraction(0)


def l_convex_objective(c: ModularComplex, rng, trials: int = 10, n: int = 2) -> PropertyResult:
    """The location function is L-convex on the ``n``-fold product complex."""
    for t in range(trials):
        inst = LocationInstance(c, n, random_costs(c.n, n, rng))
        res = is_L_convex_product([c] * n, lambda rho: objective(inst, rho))
        if not res:
            return PropertyResult(False, t + 1, (inst.costs, res.witness))
    return PropertyResult(True, trials)


def subdivision_isometry(c: ModularComplex) -> PropertyResult:
    """``d*(q/p, q'/p') == (d(p, p') + d(q, q')) / 2`` for all pairs of Boolean pairs."""
    sub = c.subdivision
    ds = sub.complex.dist
    d = c.dist
    pairs = sub.pairs
    for i, (p, q) in enumerate(pairs):
        for j, (p2, q2) in enumerate(pairs):
            if ds[i, j] != (d[p, p2] + d[q, q2]) / 2:
                return PropertyResult(False, i * len(pairs) + j, (str(pairs[i]), str(pairs[j])))
    return PropertyResult(True, len(pairs) ** 2)


def polymorphism(c: ModularComplex, rng, trials: int = 5, n: int = 2) -> PropertyResult:
    """Every constraint of every local instance at random locations passes the polymorphism test."""
    checked = 0
    for _ in range(trials):
        inst = LocationInstance(c, n, random_costs(c.n, n, rng))
        rho = tuple(rng.randrange(c.n) for _ in range(n))
        for side in "+-":
            vi = build_local_instance(inst, rho, side)
            Ls = [c.local_semilattice(q, side) for q in rho]
            for scope, table in vi.constraints:
                res = verify_polymorphism([Ls[i] for i in scope], table)
                checked += 1
                if not res:
                    return PropertyResult(False, checked, (rho, side, scope, res.witness))
    return PropertyResult(True, checked)


PROPERTIES = (
    "submodular-distance",
    "orbit-additive",
    "frame-exact",
    "l-convex-objective",
    "subdivision-isometry",
    "polymorphism",
)


def run_property(name: str, g: Graph, rng, trials=None, n=None) -> PropertyResult:
    kw = {}
    if trials is not None:
        kw["trials"] = trials
    if n is not None:
        kw["n"] = n
    if name == "frame-exact":
        return frame_exact(g, rng, **kw)
    verdict = classify(g)
    if not verdict.tractable:
        return PropertyResult(False, 0, verdict.describe())
    c = ModularComplex(g, verdict.orientation)
    if name == "submodular-distance":
        return submodular_distance(c)
    if name == "subdivision-isometry":
        return subdivision_isometry(c)
    if name == "orbit-additive":
        return orbit_additive(c, rng, **kw)
    if name == "l-convex-objective":
        return l_convex_objective(c, rng, **kw)
    if name == "polymorphism":
        return polymorphism(c, rng, **kw)
    raise ValueError(f"unknown property {name!r}")
