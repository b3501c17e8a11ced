"""Exact rational linear programming: two-phase primal simplex with Bland's rule.

The tableau is kept fraction-free (integer pivoting): every row holds integers over
one shared positive denominator, and a pivot on element ``P`` maps each other row
``r`` to ``(r * P - r[col] * pivot_row) // D`` with exact division, after which
``P`` becomes the new denominator. This is the classical Bareiss-style scheme.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import NamedTuple

from .rational import as_fraction


class LPError(ArithmeticError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


class LinearProgram:
    """``minimize c.x`` subject to linear rows and ``x >= 0``.

    Rows are ``(coeffs, sense, rhs)`` with ``coeffs`` a mapping column -> value and
    ``sense`` one of ``"=", "<=", ">="``.
    """

    def __init__(self, num_vars: int, objective=None, names=None):
        self.num_vars = num_vars
        self.c = [Fraction(0)] * num_vars
        for j, v in (objective or {}).items():
            self.c[j] = as_fraction(v)
        self.rows = []
        self.names = list(names) if names is not None else [f"x{j}" for j in range(num_vars)]

    def add_row(self, coeffs: dict, sense: str, rhs) -> None:
        if sense not in ("=", "<=", ">="):
            raise ValueError(f"bad sense {sense!r}")
        self.rows.append(({j: as_fraction(v) for j, v in coeffs.items() if v}, sense, as_fraction(rhs)))

    def to_lp_text(self) -> str:
        """Dump in the common CPLEX-style ``.lp`` layout."""

        def expr(coeffs):
            parts = []
            for j in sorted(coeffs):
                v = coeffs[j]
                sign = "-" if v < 0 else "+"
                parts.append(f"{sign} {abs(v)} {self.names[j]}")
            text = " ".join(parts) if parts else "0"
            return text[2:] if text.startswith("+ ") else text

        lines = ["Minimize", " obj: " + expr({j: v for j, v in enumerate(self.c) if v}), "Subject To"]
        for k, (coeffs, sense, rhs) in enumerate(self.rows):
            lines.append(f" r{k}: {expr(coeffs)} {sense} {rhs}")
        lines.append("Bounds")
        lines.extend(f" {name} >= 0" for name in self.names)
        lines.append("End")
        return "\n".join(lines) + "\n"


class LPResult(NamedTuple):
    value: Fraction
    x: tuple
    reduced_costs: tuple
    basis: tuple
    pivots: int


class _Tableau:
    def __init__(self, rows, basis, zrows, ncols):
        self.rows = rows  # list of int lists, last entry rhs
        self.basis = basis  # column index per row
        self.zrows = zrows  # objective rows, same layout
        self.D = 1
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        P = prow[col]
        D = self.D
        for rows in (self.rows, self.zrows):
            for k, row in enumerate(rows):
                if row is prow:
                    continue
                f = row[col]
                if f:
                    rows[k] = [(x * P - f * y) // D for x, y in zip(row, prow)]
                elif P != D:
                    rows[k] = [(x * P) // D for x in row]
        if P < 0:
            for rows in (self.rows, self.zrows):
                for k, row in enumerate(rows):
                    rows[k] = [-x for x in row]
            P = -P
        self.D = P
        self.basis[r] = col
        self.pivots += 1

    def run(self, zrow_index: int, allowed) -> None:
        """Bland's rule on the objective row ``zrow_index`` over columns ``allowed``."""
        while True:
            z = self.zrows[zrow_index]
            col = next((j for j in allowed if z[j] < 0), None)
            if col is None:
                return
            best = None
            for r, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    if best is None:
                        best = r
                    else:
                        # compare row[-1]/a with rows[best][-1]/a_best
                        lhs = row[-1] * self.rows[best][col]
                        rhs = self.rows[best][-1] * a
                        if lhs < rhs or (lhs == rhs and self.basis[r] < self.basis[best]):
                            best = r
            if best is None:
                raise Unbounded("linear program is unbounded")
            self.pivot(best, col)


def solve_lp_exact(lp: LinearProgram) -> LPResult:
    """Exact optimum of ``lp``; raises :class:`Infeasible` or :class:`Unbounded`."""
    n = lp.num_vars
    # columns: originals, then one slack/surplus per inequality row, then artificials
    slack_of = {}
    ncols = n
    for k, (_, sense, _) in enumerate(lp.rows):
        if sense != "=":
            slack_of[k] = ncols
            ncols += 1
    n_struct = ncols
    rows = []
    basis = []
    art_rows = []
    for k, (coeffs, sense, rhs) in enumerate(lp.rows):
        coeffs = dict(coeffs)
        if k in slack_of:
            coeffs[slack_of[k]] = Fraction(1 if sense == "<=" else -1)
        if rhs < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
        rows.append((coeffs, rhs))
    int_rows = []
    for k, (coeffs, rhs) in enumerate(rows):
        scale = lcm(rhs.denominator, *(v.denominator for v in coeffs.values())) if coeffs else rhs.denominator
        ic = {j: int(v * scale) for j, v in coeffs.items()}
        s = slack_of.get(k)
        if s is not None and ic.get(s, 0) > 0:
            # rescale the slack so the row's basic column carries coefficient 1
            basis.append(s)
            ic[s] = 1
            int_rows.append((ic, int(rhs * scale)))
        else:
            basis.append(None)
            art_rows.append(k)
            int_rows.append((ic, int(rhs * scale)))
    n_art = len(art_rows)
    ncols = n_struct + n_art
    tab_rows = []
    for k, (ic, rhs) in enumerate(int_rows):
        row = [0] * (ncols + 1)
        for j, v in ic.items():
            row[j] = v
        row[ncols] = rhs
        tab_rows.append(row)
    for t, k in enumerate(art_rows):
        col = n_struct + t
        tab_rows[k][col] = 1
        basis[k] = col
    cscale = lcm(*(v.denominator for v in lp.c)) if lp.c else 1
    z2 = [0] * (ncols + 1)
    for j, v in enumerate(lp.c):
        z2[j] = int(v * cscale)
    z1 = [0] * (ncols + 1)
    for k in art_rows:
        row = tab_rows[k]
        for j in range(n_struct):
            z1[j] -= row[j]
        z1[ncols] -= row[ncols]
    tab = _Tableau(tab_rows, basis, [z1, z2], ncols)
    if n_art:
        tab.run(0, range(n_struct))
        if tab.zrows[0][ncols] != 0:
            raise Infeasible("linear program is infeasible")
        # drive remaining artificial variables out of the basis or drop redundant rows
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= n_struct:
                row = tab.rows[r]
                col = next((j for j in range(n_struct) if row[j] != 0), None)
                if col is None:
                    del tab.rows[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, col)
            r += 1
    tab.run(1, range(n_struct))
    D = tab.D
    z = tab.zrows[1]
    value = Fraction(-z[ncols], D * cscale)
    x = [Fraction(0)] * n
    for r, col in enumerate(tab.basis):
        if col < n:
            x[col] = Fraction(tab.rows[r][ncols], D)
    reduced = tuple(Fraction(z[j], D * cscale) for j in range(n))
    return LPResult(value, tuple(x), reduced, tuple(tab.basis), tab.pivots)
