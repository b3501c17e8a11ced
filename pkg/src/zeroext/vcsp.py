"""Valued CSPs: the basic LP relaxation, variable fixing, and a brute-force oracle."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import prod
from typing import NamedTuple

from .graph import Verdict
from .lp import LinearProgram, solve_lp_exact
from .rational import as_value, is_inf


class VcspError(ValueError):
    pass


class BlpNotExact(VcspError):
    """Variable fixing found no value preserving the BLP optimum."""

    def __init__(self, variable: int, value):
        super().__init__(f"BLP not exact (variable {variable}, optimum {value})")
        self.variable = variable
        self.value = value


class Constraint(NamedTuple):
    scope: tuple
    table: dict  # tuple of domain labels -> Fraction or INF


class VcspInstance:
    """Heterogeneous finite domains with cost tables on sorted scopes."""

    def __init__(self, domains, constraints=()):
        self.domains = [tuple(d) for d in domains]
        if any(not d for d in self.domains):
            raise VcspError("empty domain")
        self.constraints = []
        for scope, table in constraints:
            self.add(scope, table)

    @property
    def n(self) -> int:
        return len(self.domains)

    def add(self, scope, table) -> None:
        scope = tuple(scope)
        if list(scope) != sorted(set(scope)):
            raise VcspError(f"scope {scope} must be sorted without repeats")
        if any(not 0 <= i < self.n for i in scope):
            raise VcspError(f"scope {scope} out of range")
        full = {}
        for y in product(*(self.domains[i] for i in scope)):
            if y not in table:
                raise VcspError(f"table on scope {scope} is missing tuple {y}")
            full[y] = as_value(table[y])
        self.constraints.append(Constraint(scope, full))

    def restricted(self, i: int, a) -> "VcspInstance":
        """The instance with ``D_i`` fixed to ``{a}``."""
        domains = list(self.domains)
        domains[i] = (a,)
        out = VcspInstance(domains)
        for scope, table in self.constraints:
            if i in scope:
                t = scope.index(i)
                table = {y: v for y, v in table.items() if y[t] == a}
            out.constraints.append(Constraint(scope, table))
        return out

    def evaluate(self, x):
        total = Fraction(0)
        for scope, table in self.constraints:
            total = total + table[tuple(x[i] for i in scope)]
        return total


class BlpProgram(NamedTuple):
    lp: LinearProgram
    lambda_vars: dict  # (constraint index, tuple) -> column
    mu_vars: dict  # (variable, value) -> column
    equalities: int


def build_blp(inst: VcspInstance) -> BlpProgram:
    names = []
    lam = {}
    mu = {}
    costs = {}
    for k, (scope, table) in enumerate(inst.constraints):
        dom = [y for y, v in table.items() if not is_inf(v)]
        if not dom:
            raise VcspError(f"infeasible constraint {k} on scope {scope}")
        for y in dom:
            lam[(k, y)] = len(names)
            costs[len(names)] = table[y]
            names.append(f"lam_{k}_" + "_".join(map(str, y)))
    for i, dom in enumerate(inst.domains):
        for a in dom:
            mu[(i, a)] = len(names)
            names.append(f"mu_{i}_{a}")
    lp = LinearProgram(len(names), costs, [n.replace(" ", "").replace("/", "_") for n in names])
    for k, (scope, table) in enumerate(inst.constraints):
        for t, i in enumerate(scope):
            for a in inst.domains[i]:
                row = {lam[(k, y)]: 1 for y in table if (k, y) in lam and y[t] == a}
                row[mu[(i, a)]] = -1
                lp.add_row(row, "=", 0)
    for i, dom in enumerate(inst.domains):
        lp.add_row({mu[(i, a)]: 1 for a in dom}, "=", 1)
    return BlpProgram(lp, lam, mu, len(lp.rows))


def solve_blp(inst: VcspInstance) -> tuple:
    """``(program, LPResult)`` for the BLP of ``inst``."""
    prog = build_blp(inst)
    return prog, solve_lp_exact(prog.lp)


class BlpSolution(NamedTuple):
    value: Fraction
    assignment: tuple
    lp_calls: int
    integral: bool  # whether the first relaxation optimum was already integral


def solve_vcsp_by_blp(inst: VcspInstance) -> BlpSolution:
    """Minimize by the BLP and canonical-order variable fixing.

    A probe ``F_{i,a}`` is settled without an LP when the current certificate decides
    it: a positive reduced cost on ``mu_{i,a}`` rules it out, and ``mu_{i,a} = 1`` in the
    current optimum keeps it. Both certificates remain valid after further fixings,
    since fixing only removes feasible points.
    """
    prog, res = solve_blp(inst)
    calls = 1
    opt = res.value
    integral = all(v.denominator == 1 for v in res.x)
    cert = (prog, res)
    current = inst
    chosen = []
    for i in range(inst.n):
        picked = None
        for a in inst.domains[i]:
            cprog, cres = cert
            col = cprog.mu_vars[(i, a)]
            if cres.reduced_costs[col] > 0:
                continue
            if cres.x[col] == 1:
                picked = a
                break
            trial = current.restricted(i, a)
            try:
                tprog, tres = solve_blp(trial)
            except VcspError:
                continue
            calls += 1
            if tres.value == opt:
                picked = a
                cert = (tprog, tres)
                break
        if picked is None:
            raise BlpNotExact(i, opt)
        current = current.restricted(i, picked)
        chosen.append(picked)
    x = tuple(chosen)
    if inst.evaluate(x) != opt:
        raise AssertionError("variable fixing ended away from the BLP optimum")
    return BlpSolution(opt, x, calls, integral)


def brute_force_vcsp(inst: VcspInstance, cap: int = 10**7) -> tuple:
    """Exhaustive ``(value, assignment)``; the argmin is lexicographically smallest."""
    size = prod(len(d) for d in inst.domains)
    if size > cap:
        raise VcspError(f"search space {size} exceeds cap {cap}")
    best = None
    best_x = None
    for x in product(*inst.domains):
        v = inst.evaluate(x)
        if best is None or v < best:
            best, best_x = v, x
    return best, best_x


def verify_polymorphism(Ls, f) -> Verdict:
    """Check the submodularity inequality of ``f`` on the product of ``Ls``.

    ``f`` is a table (or callable) on label tuples. The witness is the violating pair.
    """
    from .semilattice import ProductSemilattice

    P = ProductSemilattice(Ls)
    get = f if callable(f) else f.__getitem__
    n = len(P.labels)
    vals = [as_value(get(P.labels[i])) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = vals[i] + vals[j]
            rhs = vals[P.meet_i(i, j)]
            for k, c in P.fractional_join_i(i, j):
                if c:
                    rhs = rhs + c * vals[k]
            if is_inf(rhs) and not is_inf(lhs):
                return Verdict(False, (P.labels[i], P.labels[j]))
            if not is_inf(lhs) and lhs < rhs:
                return Verdict(False, (P.labels[i], P.labels[j]))
    return Verdict(True, None)
