"""Minimum 0-extension / multifacility location on orientable modular graphs.

Terminals are the graph's vertices ``0..N-1``; extras are numbered ``N..N+n-1`` in
cost tables and ``0..n-1`` as positions of a location.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import lcm
from typing import NamedTuple, Optional

from .complex import ModularComplex, restrict_to_orbit
from .graph import DistanceMatrix, Graph, GraphError, Verdict, is_modular, is_modular_metric
from .lp import LinearProgram, solve_lp_exact
from .orbits import find_admissible_orientation, is_orbit_invariant, quotient_graph
from .rational import as_fraction
from .vcsp import BlpNotExact, VcspInstance, solve_vcsp_by_blp


class SolverError(ValueError):
    pass


# -- classification -------------------------------------------------------------


class Tractable(NamedTuple):
    orientation: object

    tractable = True

    def describe(self) -> str:
        return "tractable: orientable modular"


class NPHard(NamedTuple):
    reason: str  # "not modular" or "not orientable"
    witness: object

    tractable = False

    def describe(self) -> str:
        if self.reason == "not modular":
            return f"NP-hard: not modular (witness triple {tuple(self.witness)})"
        return f"NP-hard: not orientable (witness {self.witness})"


def classify(g: Graph):
    """Dichotomy verdict: orientable modular graphs are tractable, all others NP-hard."""
    if not g.is_connected:
        raise GraphError("graph not connected")
    mod = is_modular(g)
    if not mod:
        return NPHard("not modular", mod.witness)
    found = find_admissible_orientation(g)
    if not found:
        return NPHard("not orientable", found.witness)
    return Tractable(found.witness)


# -- instances -------------------------------------------------------------------


class LocationInstance:
    """A multifacility location instance on a modular complex.

    ``costs`` maps unordered pairs over terminals and extras to nonnegative rationals.
    """

    def __init__(self, complex: ModularComplex, n: int, costs: dict):
        self.complex = complex
        self.N = complex.n
        self.n = n
        total = self.N + n
        clean = {}
        for (a, b), v in costs.items():
            if a == b or not (0 <= a < total and 0 <= b < total):
                raise SolverError(f"bad cost pair {(a, b)}")
            v = as_fraction(v)
            if v < 0:
                raise SolverError(f"negative cost on {(a, b)}")
            key = (min(a, b), max(a, b))
            clean[key] = clean.get(key, Fraction(0)) + v
        self.costs = {k: v for k, v in sorted(clean.items()) if v}
        d = complex.dist
        N = self.N
        unary = [[Fraction(0)] * N for _ in range(n)]
        pair = {}
        const = Fraction(0)
        for (a, b), v in self.costs.items():
            if b < N:
                const += v * d[a, b]
            elif a < N:
                row = unary[b - N]
                for q in range(N):
                    row[q] += v * d[a, q]
            else:
                pair[(a - N, b - N)] = v
        self.unary = [tuple(r) for r in unary]
        self.pair = pair
        self.terminal_constant = const
        self._local = {}

    def __repr__(self):
        return f"LocationInstance(N={self.N}, n={self.n}, costs={len(self.costs)})"

    def with_costs(self, costs: dict) -> "LocationInstance":
        return LocationInstance(self.complex, self.n, costs)

    def with_complex(self, complex: ModularComplex) -> "LocationInstance":
        return LocationInstance(complex, self.n, self.costs)

    @property
    def max_cost(self) -> Fraction:
        return max(self.costs.values(), default=Fraction(0))


class SolveReport(NamedTuple):
    value: Fraction
    location: tuple
    descent_steps: int
    scaling_phases: int
    blp_calls: int
    terminal_constant: Fraction = Fraction(0)
    phase_steps: tuple = ()


def objective(inst: LocationInstance, rho) -> Fraction:
    """``sum_s sum_j c(sj) d(s, rho_j) + sum_{i<j} c(ij) d(rho_i, rho_j)``."""
    d = inst.complex.dist
    total = Fraction(0)
    for j, q in enumerate(rho):
        total += inst.unary[j][q]
    for (i, j), v in inst.pair.items():
        total += v * d[rho[i], rho[j]]
    return total


def initial_location(inst: LocationInstance) -> tuple:
    """Each extra at the argmin of its unary cost, ties by vertex id."""
    return tuple(min(range(inst.N), key=lambda q: (g[q], q)) for g in inst.unary)


# -- local minimization -----------------------------------------------------------


def _vcsp_on(inst: LocationInstance, domains) -> VcspInstance:
    d = inst.complex.dist
    vi = VcspInstance(domains)
    for i, dom in enumerate(domains):
        g = inst.unary[i]
        vi.add((i,), {(q,): g[q] for q in dom})
    for (i, j), v in inst.pair.items():
        vi.add((i, j), {(a, b): v * d[a, b] for a in domains[i] for b in domains[j]})
    return vi


def build_local_instance(inst: LocationInstance, rho, side: str) -> VcspInstance:
    """The VCSP of the objective over ``L^side_rho = prod_i L^side_{rho_i}``."""
    return _vcsp_on(inst, [inst.complex.local_semilattice(q, side).labels for q in rho])


class LocalResult(NamedTuple):
    value: Fraction
    location: tuple
    blp_calls: int


def _minimize_vcsp(inst: LocationInstance, vi: VcspInstance, trace) -> LocalResult:
    try:
        sol = solve_vcsp_by_blp(vi)
    except BlpNotExact as exc:
        raise AssertionError(f"internal consistency: {exc}") from exc
    if trace is not None:
        trace.append((vi, sol))
    return LocalResult(sol.value, sol.assignment, sol.lp_calls)


def local_minimize(inst: LocationInstance, rho, side: str, trace: Optional[list] = None) -> LocalResult:
    """Minimum of the objective over ``L^side_rho`` and a minimizing neighbor.

    Results are cached on the instance; ``trace`` collects ``(vcsp, solution)`` pairs
    for freshly solved local problems.
    """
    key = (tuple(rho), side)
    hit = inst._local.get(key)
    if hit is not None:
        return hit._replace(blp_calls=0)
    res = _minimize_vcsp(inst, build_local_instance(inst, rho, side), trace)
    inst._local[key] = res
    return res


def is_locally_optimal(inst: LocationInstance, rho, trace=None) -> Verdict:
    """No forward or backward neighbor is strictly better.

    The witness is an improving neighbor.
    """
    here = objective(inst, rho)
    for side in "+-":
        res = local_minimize(inst, rho, side, trace)
        if res.value < here:
            return Verdict(False, res.location)
    return Verdict(True)


def q_neighbor_domains(inst: LocationInstance, rho, orbit: int, side: str) -> list:
    c = inst.complex
    return [restrict_to_orbit(c, c.local_semilattice(q, side), orbit)[0].labels for q in rho]


def is_Q_locally_optimal(inst: LocationInstance, rho, orbit: int, trace=None) -> Verdict:
    """No neighbor moving only along orbit edges is strictly better, under unit edge lengths."""
    unit = inst.with_complex(inst.complex.with_unit_weights())
    here = objective(unit, rho)
    for side in "+-":
        res = _minimize_vcsp(unit, _vcsp_on(unit, q_neighbor_domains(unit, rho, orbit, side)), trace)
        if res.value < here:
            return Verdict(False, res.location)
    return Verdict(True)


def is_orbit_locally_optimal(inst: LocationInstance, rho, trace=None) -> Verdict:
    """The orbit-restricted test over all orbits; the witness is ``(orbit, improving neighbor)``."""
    for q in range(inst.complex.orbits.orbit_count):
        res = is_Q_locally_optimal(inst, rho, q, trace)
        if not res:
            return Verdict(False, (q, res.witness))
    return Verdict(True)


# -- descent and scaling ----------------------------------------------------------


def steepest_descent(inst: LocationInstance, rho0=None, trace=None, max_steps=None) -> SolveReport:
    """Move to the better of the best forward and backward neighbors until neither improves.

    Ties between the two sides go to the forward side.
    """
    rho = initial_location(inst) if rho0 is None else tuple(rho0)
    value = objective(inst, rho)
    steps = 0
    calls = 0
    while True:
        best = None
        for side in "+-":
            res = local_minimize(inst, rho, side, trace)
            calls += res.blp_calls
            if best is None or res.value < best.value:
                best = res
        if best.value >= value:
            break
        rho, value = tuple(best.location), best.value
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise AssertionError(f"descent exceeded {max_steps} steps")
    return SolveReport(value, rho, steps, 1, calls, inst.terminal_constant, (steps,))


def step_bound(inst: LocationInstance) -> int:
    """``|V|^2 * diam`` with ``|V|`` counting terminals and extras."""
    return (inst.N + inst.n) ** 2 * inst.complex.graph.diameter


def integer_costs(costs: dict) -> tuple:
    """Costs scaled by the LCM of their denominators, and that multiplier."""
    m = lcm(*(v.denominator for v in costs.values())) if costs else 1
    return {k: int(v * m) for k, v in costs.items()}, m


def scaled_solve(inst: LocationInstance, trace=None) -> SolveReport:
    """Cost-scaled descent: solve with ``floor(c / 2)`` first, then warm-start at ``c``.

    Descent runs under unit edge lengths, which keeps every step an integer
    improvement; an optimum for unit lengths is optimal for the given lengths too.
    """
    ic, _ = integer_costs(inst.costs)
    C = max(ic.values(), default=0)
    phases = C.bit_length()
    unit_complex = inst.complex.with_unit_weights()
    rho = initial_location(inst)
    bound = step_bound(inst)
    steps = []
    calls = 0
    for k in range(phases, 0, -1):
        shift = k - 1
        sub = LocationInstance(unit_complex, inst.n, {e: v >> shift for e, v in ic.items()})
        rep = steepest_descent(sub, rho, trace)
        if rep.descent_steps > bound:
            raise AssertionError(f"phase used {rep.descent_steps} steps, bound {bound}")
        steps.append(rep.descent_steps)
        calls += rep.blp_calls
        rho = rep.location
    return SolveReport(objective(inst, rho), rho, sum(steps), phases, calls, inst.terminal_constant, tuple(steps))


def brute_force_solve(inst: LocationInstance, cap: int = 10**7) -> SolveReport:
    """Exhaustive minimum over all locations; the argmin is lexicographically smallest."""
    if inst.N ** inst.n > cap:
        raise SolverError(f"search space {inst.N ** inst.n} exceeds cap {cap}")
    best = None
    best_rho = None
    for rho in product(range(inst.N), repeat=inst.n):
        v = objective(inst, rho)
        if best is None or v < best:
            best, best_rho = v, rho
    return SolveReport(best, best_rho, 0, 0, 0, inst.terminal_constant)


def solve(inst: LocationInstance, method: str = "scaled", trace=None) -> SolveReport:
    if method == "scaled":
        return scaled_solve(inst, trace)
    if method == "descent":
        return steepest_descent(inst, None, trace)
    if method == "blp":
        # the whole problem as one VCSP over all vertices
        vi = _vcsp_on(inst, [tuple(range(inst.N))] * inst.n)
        sol = solve_vcsp_by_blp(vi)
        return SolveReport(sol.value, sol.assignment, 0, 0, sol.lp_calls, inst.terminal_constant)
    if method == "brute":
        return brute_force_solve(inst)
    raise ValueError(f"unknown method {method!r}")


# -- orbits -----------------------------------------------------------------------


def quotient_instance(inst: LocationInstance, orbit: int) -> tuple:
    """Instance on ``Gamma/Q`` under unit lengths, terminals mapped to their classes."""
    g = inst.complex.graph
    qg, vmap = quotient_graph(g, inst.complex.orbits.members(orbit))
    N, M = inst.N, qg.n
    costs = {}
    for (a, b), v in inst.costs.items():
        if b < N:
            continue
        a2 = vmap[a] if a < N else a - N + M
        key = (a2, b - N + M)
        costs[key] = costs.get(key, Fraction(0)) + v
    return qg, vmap, costs


def orbit_tau(inst: LocationInstance, orbit: int, cap: int = 10**7) -> Fraction:
    """``tau_Q``: the optimum of the instance on the quotient by orbit ``Q`` (unit lengths)."""
    qg, _, costs = quotient_instance(inst, orbit)
    if isinstance(classify(qg), Tractable):
        qi = LocationInstance(ModularComplex(qg), inst.n, costs)
        return scaled_solve(qi).value
    # defensive fallback; quotients of orientable modular graphs stay orientable modular
    from .graph import shortest_path_metric

    d = shortest_path_metric(qg)
    return _brute_on_metric(d, qg.n, inst.n, costs, cap)


def _brute_on_metric(d, N, n, costs, cap) -> Fraction:
    if N ** n > cap:
        raise SolverError(f"search space {N ** n} exceeds cap {cap}")
    best = None
    for rho in product(range(N), repeat=n):
        pos = list(range(N)) + list(rho)
        v = sum((c * d[pos[a], pos[b]] for (a, b), c in costs.items() if b >= N), Fraction(0))
        if best is None or v < best:
            best = v
    return best if best is not None else Fraction(0)


def orbit_taus(inst: LocationInstance) -> list:
    return [orbit_tau(inst, q) for q in range(inst.complex.orbits.orbit_count)]


# -- metric relaxation ---------------------------------------------------------------


def solve_metric_relaxation(g: Graph, n: int, costs: dict) -> Fraction:
    """Optimum of ``sum c(xy) d(x, y)`` over metrics on terminals plus extras extending ``d_g``.

    Terminal-terminal costs are constants and excluded, as in the 0-extension objective.
    The LP is solved through its dual, whose slack basis is feasible because ``c >= 0``.
    """
    from .graph import shortest_path_metric

    N = g.n
    total = N + n
    if n == 0:
        return Fraction(0)
    d = shortest_path_metric(g)
    var = {}
    for a, b in combinations(range(total), 2):
        if b >= N:
            var[(a, b)] = len(var)
    cost = [Fraction(0)] * len(var)
    for (a, b), v in costs.items():
        a, b = min(a, b), max(a, b)
        if b >= N and a != b:
            cost[var[(a, b)]] += as_fraction(v)

    def term(x, y):
        x, y = min(x, y), max(x, y)
        return ("v", var[(x, y)]) if y >= N else ("c", d[x, y])

    # primal rows: d(x,y) + d(y,z) - d(x,z) >= 0 for triples touching an extra
    rows = []
    for x, y, z in combinations(range(total), 3):
        if z < N:
            continue
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            # d(a,c) <= d(a,b) + d(b,c)  <=>  d(a,b) + d(b,c) - d(a,c) >= 0
            coeffs = {}
            rhs = Fraction(0)
            for (p, q), s in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
                kind, val = term(p, q)
                if kind == "v":
                    coeffs[val] = coeffs.get(val, 0) + s
                else:
                    rhs -= s * val
            coeffs = {k: v for k, v in coeffs.items() if v}
            if coeffs:
                rows.append((coeffs, rhs))
    # dual: max rhs.y subject to sum_r y_r A_r <= cost, y >= 0
    dual = LinearProgram(len(rows), {r: -rhs for r, (_, rhs) in enumerate(rows)})
    cols = [dict() for _ in range(len(var))]
    for r, (coeffs, _) in enumerate(rows):
        for k, v in coeffs.items():
            cols[k][r] = v
    for k in range(len(var)):
        dual.add_row(cols[k], "<=", cost[k])
    return -solve_lp_exact(dual).value


# -- metric front end ---------------------------------------------------------------


class SupportGraph(NamedTuple):
    graph: Graph
    classification: object


def support_graph(mu: DistanceMatrix) -> SupportGraph:
    """``H_mu``: pairs with no strictly intermediate point, weighted by ``mu``."""
    k = len(mu.rows)
    for p in range(k):
        if mu[p, p] != 0:
            raise SolverError(f"nonzero diagonal at {p}")
        for q in range(k):
            if mu[p, q] != mu[q, p]:
                raise SolverError(f"asymmetric at {(p, q)}")
            if p != q and mu[p, q] <= 0:
                raise SolverError(f"nonpositive distance at {(p, q)}")
    bad = mu.triangle_violation()
    if bad is not None:
        raise SolverError(f"triangle inequality fails on {bad}")
    edges = []
    for x, y in combinations(range(k), 2):
        if not any(mu[x, z] + mu[z, y] == mu[x, y] for z in range(k) if z != x and z != y):
            edges.append((x, y, mu[x, y]))
    H = Graph(k, edges)
    from .graph import shortest_path_metric

    if shortest_path_metric(H) != mu:
        raise AssertionError("support graph does not reproduce the metric")
    mod = is_modular_metric(mu)
    if not mod:
        return SupportGraph(H, NPHard("not modular", mod.witness))
    if not is_modular(H):
        raise AssertionError("support graph of a modular metric must be modular")
    if not is_orbit_invariant(H):
        raise AssertionError("support weights of a modular metric must be orbit-invariant")
    found = find_admissible_orientation(H)
    if not found:
        return SupportGraph(H, NPHard("not orientable", found.witness))
    return SupportGraph(H, Tractable(found.witness))
