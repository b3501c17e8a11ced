"""Modular semilattices with valuations: meets, joins, interval profiles, envelopes,
fractional joins, antipodality and submodularity tests.

Elements are arbitrary hashable labels; internally they are numbered ``0..k-1`` and
order ideals/filters are kept as int bitmasks.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Callable, NamedTuple

from .graph import Graph, Verdict, mask_members, shortest_path_metric
from .rational import INF, as_fraction, as_value


class SemilatticeError(ValueError):
    pass


class FractionalJoin(NamedTuple):
    """Formal convex combination ``sum coeff * element`` over the envelope, in order."""

    terms: tuple

    def total(self) -> Fraction:
        return sum((c for _, c in self.terms), Fraction(0))

    def support(self) -> tuple:
        return tuple((u, c) for u, c in self.terms if c != 0)

    def evaluate(self, f) -> object:
        """``sum coeff * f(u)`` with ``inf * 0 = 0``."""
        total = Fraction(0)
        for u, c in self.terms:
            if c:
                total = total + c * f(u)
        return total


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_ccw(points):
    """Strict convex hull (collinear points dropped), counter-clockwise from the lowest-left point."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def maximal_extreme_chain(points, x_max, y_max):
    """Hull vertices from ``(x_max, 0)`` counter-clockwise to ``(0, y_max)``.

    These are the maximal extreme points of the hull of a profile that contains the
    three corners ``(0, 0)``, ``(x_max, 0)`` and ``(0, y_max)`` and lies in the box
    they span. Degenerate boxes collapse to the one point carrying the whole cone.
    """
    if x_max == 0:
        return [(0, y_max)]
    if y_max == 0:
        return [(x_max, 0)]
    hull = _hull_ccw(points)
    start = hull.index((x_max, 0))
    chain = []
    i = start
    while True:
        chain.append(hull[i])
        if hull[i] == (0, y_max):
            return chain
        i = (i + 1) % len(hull)


class ModularSemilattice:
    """Finite meet-semilattice with a rational valuation.

    ``leq`` is a predicate on labels; ``valuation`` maps labels to rationals (a mapping
    or a callable). Construction does not validate modularity; use
    :func:`is_modular_semilattice` and :func:`is_valuation` for that.
    """

    def __init__(self, labels, leq: Callable, valuation):
        self.labels = tuple(labels)
        self.index = {x: i for i, x in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise SemilatticeError("duplicate element labels")
        k = len(self.labels)
        down = [0] * k
        up = [0] * k
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                if i == j or leq(a, b):
                    down[j] |= 1 << i
                    up[i] |= 1 << j
        self.down = tuple(down)
        self.up = tuple(up)
        getv = valuation if callable(valuation) else valuation.__getitem__
        self.val = tuple(as_fraction(getv(x)) for x in self.labels)
        bottoms = [i for i in range(k) if self.down[i] == 1 << i]
        if len(bottoms) != 1 or self.up[bottoms[0]] != (1 << k) - 1:
            raise SemilatticeError("a semilattice needs a unique minimum element")
        self.bottom_index = bottoms[0]
        self._meet = {}
        self._join = {}
        self._fj = {}

    @classmethod
    def from_covers(cls, labels, covers, valuation=None):
        """Build from cover pairs ``(lower, upper)``; default valuation is the rank."""
        labels = list(labels)
        idx = {x: i for i, x in enumerate(labels)}
        succ = [[] for _ in labels]
        for a, b in covers:
            succ[idx[a]].append(idx[b])
        reach = [None] * len(labels)

        def upset(i):
            if reach[i] is None:
                m = 1 << i
                for j in succ[i]:
                    m |= upset(j)
                reach[i] = m
            return reach[i]

        for i in range(len(labels)):
            upset(i)
        leq = lambda a, b: bool(reach[idx[a]] >> idx[b] & 1)
        if valuation is None:
            rank = _longest_chain_rank(labels, succ)
            valuation = {x: rank[i] for i, x in enumerate(labels)}
        return cls(labels, leq, valuation)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __repr__(self):
        return f"{type(self).__name__}(size={len(self.labels)})"

    @property
    def bottom(self):
        return self.labels[self.bottom_index]

    def valuation(self, x) -> Fraction:
        return self.val[self.index[x]]

    def leq(self, a, b) -> bool:
        return bool(self.down[self.index[b]] >> self.index[a] & 1)

    def v(self, a, b) -> Fraction:
        """``v[a, b] = v(b) - v(a)`` for ``a <= b``."""
        return self.val[self.index[b]] - self.val[self.index[a]]

    # -- index-level primitives -------------------------------------------------

    def _max_of(self, mask):
        for i in mask_members(mask):
            if mask & ~self.down[i] == 0:
                return i
        return None

    def _min_of(self, mask):
        for i in mask_members(mask):
            if mask & ~self.up[i] == 0:
                return i
        return None

    def meet_i(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        m = self._meet.get(key)
        if m is None:
            m = self._max_of(self.down[i] & self.down[j])
            if m is None:
                raise SemilatticeError(
                    f"not a semilattice: {self.labels[i]!r} and {self.labels[j]!r} have no unique meet"
                )
            self._meet[key] = m
        return m

    def join_i(self, i: int, j: int):
        key = (i, j) if i <= j else (j, i)
        if key not in self._join:
            common = self.up[i] & self.up[j]
            if not common:
                self._join[key] = None
            else:
                m = self._min_of(common)
                if m is None:
                    raise SemilatticeError(
                        f"not modular semilattice: {self.labels[i]!r}, {self.labels[j]!r} "
                        "have several minimal upper bounds"
                    )
                self._join[key] = m
        return self._join[key]

    def interval_i(self, i: int, j: int) -> list:
        """Metric interval as joins ``a v b`` over ``[i^j, i] x [i^j, j]``."""
        m = self.meet_i(i, j)
        A = mask_members(self.down[i] & self.up[m])
        B = mask_members(self.down[j] & self.up[m])
        out = []
        for a in A:
            for b in B:
                c = self.join_i(a, b)
                if c is not None and c not in out:
                    out.append(c)
        return out

    def vector_i(self, u: int, i: int, j: int) -> tuple:
        m = self.meet_i(i, j)
        vm = self.val[m]
        return (self.val[self.meet_i(u, i)] - vm, self.val[self.meet_i(u, j)] - vm)

    def envelope_i(self, i: int, j: int) -> list:
        m = self.meet_i(i, j)
        x_max = self.val[i] - self.val[m]
        y_max = self.val[j] - self.val[m]
        if x_max == 0:
            return [j]
        if y_max == 0:
            return [i]
        by_vec = {}
        for u in self.interval_i(i, j):
            by_vec.setdefault(self.vector_i(u, i, j), []).append(u)
        chain = maximal_extreme_chain(list(by_vec), x_max, y_max)
        out = []
        for z in chain:
            us = by_vec[z]
            if len(us) != 1:
                raise SemilatticeError(f"envelope point {z} has several preimages {us}")
            out.append(us[0])
        return out

    def breakpoints_i(self, env: list) -> list:
        """``delta_0 .. delta_{m-1}`` for an ordered envelope ``u_0 .. u_m``."""
        out = []
        for a, b in zip(env, env[1:]):
            w = self.val[self.meet_i(a, b)]
            da, db = self.val[a] - w, self.val[b] - w
            out.append(da / (da + db))
        return out

    def fractional_join_i(self, i: int, j: int) -> tuple:
        key = (i, j)
        fj = self._fj.get(key)
        if fj is None:
            env = self.envelope_i(i, j)
            deltas = [Fraction(0)] + self.breakpoints_i(env) + [Fraction(1)]
            fj = tuple((u, deltas[k + 1] - deltas[k]) for k, u in enumerate(env))
            self._fj[key] = fj
        return fj

    # -- label-level operations -------------------------------------------------

    def meet(self, p, q):
        return self.labels[self.meet_i(self.index[p], self.index[q])]

    def join_if_bounded(self, p, q):
        """``p v q`` when the pair has a common upper bound, else None."""
        j = self.join_i(self.index[p], self.index[q])
        return None if j is None else self.labels[j]

    def is_bounded(self, p, q) -> bool:
        return self.join_i(self.index[p], self.index[q]) is not None

    def distance(self, p, q) -> Fraction:
        i, j = self.index[p], self.index[q]
        m = self.meet_i(i, j)
        return self.val[i] + self.val[j] - 2 * self.val[m]

    def covers(self) -> list:
        """Hasse diagram as ``(lower, upper)`` label pairs."""
        out = []
        for j in range(len(self.labels)):
            below = self.down[j] & ~(1 << j)
            for i in mask_members(below):
                between = self.up[i] & below & ~(1 << i)
                if not between:
                    out.append((self.labels[i], self.labels[j]))
        return out

    def covering_graph(self) -> Graph:
        """Covering graph on element indices weighted by ``v[a, b]``."""
        edges = [
            (self.index[a], self.index[b], self.v(a, b)) for a, b in self.covers()
        ]
        return Graph(len(self.labels), edges)


def _longest_chain_rank(labels, succ):
    order = []
    seen = [False] * len(labels)

    def visit(i):
        if seen[i]:
            return
        seen[i] = True
        for j in succ[i]:
            visit(j)
        order.append(i)

    for i in range(len(labels)):
        visit(i)
    rank = [0] * len(labels)
    for i in reversed(order):
        for j in succ[i]:
            rank[j] = max(rank[j], rank[i] + 1)
    return rank


class IntervalProfile(NamedTuple):
    points: tuple  # (element, (x, y))


def meet(L: ModularSemilattice, p, q):
    return L.meet(p, q)


def join_if_bounded(L: ModularSemilattice, p, q):
    return L.join_if_bounded(p, q)


def interval(L: ModularSemilattice, p, q) -> list:
    i, j = L.index[p], L.index[q]
    return [L.labels[u] for u in L.interval_i(i, j)]


def interval_profile(L: ModularSemilattice, p, q) -> IntervalProfile:
    """Vectors ``(v[p^q, u^p], v[p^q, u^q])`` over ``I(p, q)``; the join decomposition is checked."""
    i, j = L.index[p], L.index[q]
    pts = []
    for u in L.interval_i(i, j):
        a, b = L.meet_i(u, i), L.meet_i(u, j)
        if L.join_i(a, b) != u:
            raise SemilatticeError(f"interval element {L.labels[u]!r} is not the join of its projections")
        pts.append((L.labels[u], L.vector_i(u, i, j)))
    return IntervalProfile(tuple(pts))


def envelope(L: ModularSemilattice, p, q) -> tuple:
    """Elements at the maximal extreme points of the profile hull, ordered from ``p`` to ``q``."""
    return tuple(L.labels[u] for u in L.envelope_i(L.index[p], L.index[q]))


def fractional_join(L: ModularSemilattice, p, q) -> FractionalJoin:
    """Envelope elements weighted by their normal-cone measures.

    The measure of the cone at the k-th envelope element is ``delta_k - delta_{k-1}``
    with ``delta_k = v[w, u_k] / (v[w, u_k] + v[w, u_{k+1}])`` for ``w = u_k ^ u_{k+1}``,
    ``delta_{-1} = 0`` and ``delta_m = 1``.
    """
    fj = L.fractional_join_i(L.index[p], L.index[q])
    return FractionalJoin(tuple((L.labels[u], c) for u, c in fj))


def is_antipodal(L: ModularSemilattice, p, q) -> bool:
    """Incomparable pair whose envelope is just ``(p, q)``.

    The inequality ``v[a, p] v[b, q] >= v[p^q, a] v[p^q, b]`` over bounded
    ``(a, b)`` in ``[p^q, p] x [p^q, q]`` is evaluated as an independent check.
    """
    i, j = L.index[p], L.index[q]
    m = L.meet_i(i, j)
    if m in (i, j):
        return False
    by_envelope = L.envelope_i(i, j) == [i, j]
    val = L.val
    by_inequality = True
    for a in mask_members(L.down[i] & L.up[m]):
        for b in mask_members(L.down[j] & L.up[m]):
            if L.join_i(a, b) is None:
                continue
            if (val[i] - val[a]) * (val[j] - val[b]) < (val[a] - val[m]) * (val[b] - val[m]):
                by_inequality = False
                break
        if not by_inequality:
            break
    if by_envelope != by_inequality:
        raise SemilatticeError(f"antipodality tests disagree on {(p, q)!r}")
    return by_envelope


def _values(L, f):
    getf = f if callable(f) else f.__getitem__
    return [as_value(getf(x)) for x in L.labels]


def _fj_value(fj, F):
    total = Fraction(0)
    for u, c in fj:
        if c:
            total = total + c * F[u]
    return total


def _submodular_violation(L: ModularSemilattice, F, pairs=None):
    k = len(L.labels)
    it = pairs if pairs is not None else combinations(range(k), 2)
    for i, j in it:
        lhs = F[i] + F[j]
        if lhs is INF:
            continue
        rhs = F[L.meet_i(i, j)] + _fj_value(L.fractional_join_i(i, j), F)
        if rhs is INF or lhs < rhs:
            return (L.labels[i], L.labels[j])
    return None


def _wedge_convex(L, F, i, j) -> bool:
    m = L.meet_i(i, j)
    a = L.val[i] - L.val[m]
    b = L.val[j] - L.val[m]
    lhs = b * F[i] + a * F[j]
    rhs = (a + b) * F[m]
    if lhs is INF:
        return True
    return rhs is not INF and lhs >= rhs


def submodularity_conditions(L: ModularSemilattice, f) -> Verdict:
    """Envelope-in-domain, bounded-pair submodularity and antipodal wedge-convexity."""
    F = _values(L, f)
    k = len(L.labels)
    for i, j in combinations(range(k), 2):
        if F[i] is not INF and F[j] is not INF:
            if any(F[u] is INF for u in L.envelope_i(i, j)):
                return Verdict(False, ("envelope leaves domain", (L.labels[i], L.labels[j])))
        jn = L.join_i(i, j)
        if jn is not None:
            lhs = F[i] + F[j]
            rhs = F[L.meet_i(i, j)] + F[jn]
            if lhs is not INF and (rhs is INF or lhs < rhs):
                return Verdict(False, ("bounded pair", (L.labels[i], L.labels[j])))
        elif L.meet_i(i, j) not in (i, j) and L.envelope_i(i, j) == [i, j]:
            if not _wedge_convex(L, F, i, j):
                return Verdict(False, ("antipodal pair", (L.labels[i], L.labels[j])))
    return Verdict(True)


def is_submodular(L: ModularSemilattice, f, cross_check: bool = True) -> Verdict:
    """``f(p) + f(q) >= f(p^q) + sum [C(u)] f(u)`` for all pairs; witness is a violating pair.

    ``f`` is a mapping or callable on labels and may take the value ``INF``. With
    ``cross_check`` the three-condition characterization is evaluated too and must agree.
    """
    F = _values(L, f)
    bad = _submodular_violation(L, F)
    verdict = Verdict(bad is None, bad)
    if cross_check:
        other = submodularity_conditions(L, f)
        if other.ok != verdict.ok:
            raise SemilatticeError(f"submodularity characterizations disagree: {verdict} vs {other}")
    return verdict


class ProductSemilattice(ModularSemilattice):
    """Direct product with the sum valuation; fractional joins come from the factors."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        labels = list(product(*[F.labels for F in self.factors]))
        fac = self.factors

        def leq(a, b):
            return all(F.leq(x, y) for F, x, y in zip(fac, a, b))

        super().__init__(labels, leq, lambda t: sum((F.valuation(x) for F, x in zip(fac, t)), Fraction(0)))

    def _coords(self, i):
        return self.labels[i]

    def meet_i(self, i, j):
        key = (i, j) if i <= j else (j, i)
        m = self._meet.get(key)
        if m is None:
            a, b = self.labels[i], self.labels[j]
            m = self.index[tuple(F.meet(x, y) for F, x, y in zip(self.factors, a, b))]
            self._meet[key] = m
        return m

    def fractional_join_i(self, i, j):
        key = (i, j)
        fj = self._fj.get(key)
        if fj is None:
            terms = product_fractional_join(self.factors, self.labels[i], self.labels[j])
            fj = tuple((self.index[t], c) for t, c in terms)
            self._fj[key] = fj
        return fj


def product_fractional_join(Ls, x, y) -> list:
    """Fractional join of tuples in a product of semilattices.

    Each coordinate contributes its envelope and breakpoints; the union of all
    breakpoints cuts ``[0, 1]`` into cells, and each cell of positive length yields
    the tuple of coordinate envelope elements active on it.
    """
    per = []
    cuts = {Fraction(0), Fraction(1)}
    for L, a, b in zip(Ls, x, y):
        i, j = L.index[a], L.index[b]
        env = L.envelope_i(i, j)
        bps = L.breakpoints_i(env) + [Fraction(1)]
        per.append((L, env, bps))
        cuts.update(bps)
    cuts = sorted(cuts)
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        tup = []
        for L, env, bps in per:
            k = next(k for k, d in enumerate(bps) if d >= hi)
            tup.append(L.labels[env[k]])
        out.append((tuple(tup), hi - lo))
    return out


def explicit_product(Ls) -> ModularSemilattice:
    """The product built as a plain semilattice (no factor shortcuts), for cross-checks."""
    fac = tuple(Ls)
    labels = list(product(*[F.labels for F in fac]))
    return ModularSemilattice(
        labels,
        lambda a, b: all(F.leq(x, y) for F, x, y in zip(fac, a, b)),
        lambda t: sum((F.valuation(x) for F, x in zip(fac, t)), Fraction(0)),
    )


def is_submodular_product_finite(L1: ModularSemilattice, L2: ModularSemilattice, f) -> Verdict:
    """Submodularity on ``L1 x L2`` from 2-bounded pairs and coordinatewise antipodal pairs only.

    Valid only for finite-valued ``f``.
    """
    P = ProductSemilattice([L1, L2])
    F = _values(P, f)
    if any(x is INF for x in F):
        raise SemilatticeError("criterion valid only for finite-valued f")
    k = len(P.labels)
    for i, j in combinations(range(k), 2):
        jn = P.join_i(i, j)
        if jn is not None:
            m = P.meet_i(i, j)
            if (
                m not in (i, j)
                and _covers(P, i, jn)
                and _covers(P, j, jn)
                and F[i] + F[j] < F[m] + F[jn]
            ):
                return Verdict(False, ("2-bounded pair", (P.labels[i], P.labels[j])))
        (a1, a2), (b1, b2) = P.labels[i], P.labels[j]
        if (a1 == b1 and is_antipodal(L2, a2, b2)) or (a2 == b2 and is_antipodal(L1, a1, b1)):
            if not _wedge_convex(P, F, i, j):
                return Verdict(False, ("antipodal coordinate pair", (P.labels[i], P.labels[j])))
    return Verdict(True)


def _covers(L, i, j) -> bool:
    between = L.up[i] & L.down[j] & ~(1 << i) & ~(1 << j)
    return i != j and bool(L.down[j] >> i & 1) and not between


def is_modular_semilattice(L: ModularSemilattice) -> Verdict:
    """Semilattice, graded principal ideals with the rank equality, and the triple-join rule."""
    k = len(L.labels)
    try:
        for i in range(k):
            for j in range(i + 1, k):
                L.meet_i(i, j)
    except SemilatticeError as exc:
        return Verdict(False, ("no meet", str(exc)))
    succ = [[] for _ in range(k)]
    for a, b in L.covers():
        succ[L.index[a]].append(L.index[b])
    rank = _longest_chain_rank(L.labels, succ)
    for i in range(k):
        for j in succ[i]:
            if rank[j] != rank[i] + 1:
                return Verdict(False, ("not graded", (L.labels[i], L.labels[j])))
    joins = {}
    for i in range(k):
        for j in range(i + 1, k):
            if not (L.up[i] & L.up[j]):
                continue
            try:
                jn = L.join_i(i, j)
            except SemilatticeError:
                return Verdict(False, ("no unique join", (L.labels[i], L.labels[j])))
            joins[(i, j)] = jn
            if rank[i] + rank[j] != rank[jn] + rank[L.meet_i(i, j)]:
                return Verdict(False, ("rank equality", (L.labels[i], L.labels[j])))
    for a, b, c in combinations(range(k), 3):
        if (a, b) in joins and (b, c) in joins and (a, c) in joins:
            if not (L.up[a] & L.up[b] & L.up[c]):
                return Verdict(False, ("triple join", (L.labels[a], L.labels[b], L.labels[c])))
    return Verdict(True)


def is_valuation(L: ModularSemilattice) -> Verdict:
    for a, b in L.covers():
        if L.v(a, b) <= 0:
            return Verdict(False, ("not increasing", (a, b)))
    k = len(L.labels)
    for i in range(k):
        for j in range(i + 1, k):
            jn = L.join_i(i, j)
            if jn is not None and L.val[i] + L.val[j] != L.val[jn] + L.val[L.meet_i(i, j)]:
                return Verdict(False, ("not modular", (L.labels[i], L.labels[j])))
    return Verdict(True)


def weights_from_valuation(L: ModularSemilattice) -> dict:
    """Cover pair ``(a, b)`` -> ``v(b) - v(a)``."""
    return {(a, b): L.v(a, b) for a, b in L.covers()}


def valuation_from_weights(L: ModularSemilattice, weights: dict) -> dict:
    """``v(p) = d_h(bottom, p)`` on the covering graph; weights must be orbit-invariant."""
    from .orbits import orbit_weights

    edges = []
    for a, b in L.covers():
        w = weights.get((a, b), weights.get((b, a)))
        if w is None:
            raise SemilatticeError(f"missing weight for cover {(a, b)!r}")
        edges.append((L.index[a], L.index[b], w))
    g = Graph(len(L.labels), edges)
    orbit_weights(g)
    d = shortest_path_metric(g)
    return {x: d[L.bottom_index, i] for i, x in enumerate(L.labels)}


def with_valuation(L: ModularSemilattice, valuation) -> ModularSemilattice:
    return ModularSemilattice(L.labels, L.leq, valuation)


def covering_metric(L: ModularSemilattice):
    """Shortest-path metric of the covering graph under valuation weights (index-based)."""
    return shortest_path_metric(L.covering_graph())
