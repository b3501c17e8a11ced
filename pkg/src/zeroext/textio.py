"""Line-oriented text formats for graphs, location instances and finite metrics.

Graph::

    graph <n>
    edge <u> <v> [<num>[/<den>]]

Instance (vertices ``0..N-1`` are terminals, ``N..N+n-1`` extras)::

    instance <n_extra>
    cost <a> <b> <num>[/<den>]

Metric::

    metric <k>
    dist <a> <b> <num>[/<den>]

``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import DistanceMatrix, Graph, GraphError
from .rational import format_rational, parse_rational


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _tokens(text: str):
    """Yield ``(line_no, [(column, token), ...])`` for non-empty lines."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in line.split():
            col = line.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield no, toks


def _int(no, tok) -> int:
    col, s = tok
    try:
        return int(s)
    except ValueError:
        raise ParseError(no, col, f"expected an integer, got {s!r}") from None


def _rat(no, tok) -> Fraction:
    col, s = tok
    try:
        return parse_rational(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(no, col, f"expected a rational num[/den], got {s!r}") from None


def _header(lines, keyword: str):
    try:
        no, toks = next(lines)
    except StopIteration:
        raise ParseError(1, 1, f"missing '{keyword} <n>' header") from None
    if toks[0][1] != keyword or len(toks) != 2:
        raise ParseError(no, toks[0][0], f"expected '{keyword} <n>' header")
    n = _int(no, toks[1])
    if n < 0:
        raise ParseError(no, toks[1][0], "count must be nonnegative")
    return n


def parse_graph(text: str) -> Graph:
    lines = _tokens(text)
    n = _header(lines, "graph")
    edges = {}
    for no, toks in lines:
        if toks[0][1] != "edge" or len(toks) not in (3, 4):
            raise ParseError(no, toks[0][0], "expected 'edge <u> <v> [<weight>]'")
        u, v = _int(no, toks[1]), _int(no, toks[2])
        for tok, x in ((toks[1], u), (toks[2], v)):
            if not 0 <= x < n:
                raise ParseError(no, tok[0], f"vertex {x} out of range")
        if u == v:
            raise ParseError(no, toks[1][0], "loop")
        w = _rat(no, toks[3]) if len(toks) == 4 else Fraction(1)
        if w <= 0:
            raise ParseError(no, toks[3][0], "nonpositive weight")
        key = (min(u, v), max(u, v))
        if key in edges:
            raise ParseError(no, toks[0][0], f"parallel edge {key}")
        edges[key] = w
    try:
        return Graph(n, [(u, v, w) for (u, v), w in edges.items()])
    except GraphError as exc:
        raise ParseError(1, 1, str(exc)) from None


def dump_graph(g: Graph) -> str:
    lines = [f"graph {g.n}"]
    for u, v in g.edges:
        w = g.weight(u, v)
        lines.append(f"edge {u} {v}" + ("" if w == 1 else f" {format_rational(w)}"))
    return "\n".join(lines) + "\n"


def parse_instance(text: str, n_terminals: int) -> tuple:
    """``(n_extra, costs)`` with costs keyed by sorted pairs; repeated pairs add up."""
    lines = _tokens(text)
    n = _header(lines, "instance")
    total = n_terminals + n
    costs = {}
    for no, toks in lines:
        if toks[0][1] != "cost" or len(toks) != 4:
            raise ParseError(no, toks[0][0], "expected 'cost <a> <b> <value>'")
        a, b = _int(no, toks[1]), _int(no, toks[2])
        for tok, x in ((toks[1], a), (toks[2], b)):
            if not 0 <= x < total:
                raise ParseError(no, tok[0], f"vertex {x} out of range")
        if a == b:
            raise ParseError(no, toks[1][0], "loop")
        c = _rat(no, toks[3])
        if c < 0:
            raise ParseError(no, toks[3][0], "negative cost")
        key = (min(a, b), max(a, b))
        costs[key] = costs.get(key, Fraction(0)) + c
    return n, costs


def dump_instance(n: int, costs: dict) -> str:
    lines = [f"instance {n}"]
    for (a, b), c in sorted(costs.items()):
        lines.append(f"cost {a} {b} {format_rational(c)}")
    return "\n".join(lines) + "\n"


def parse_metric(text: str) -> DistanceMatrix:
    lines = _tokens(text)
    k = _header(lines, "metric")
    rows = [[Fraction(0)] * k for _ in range(k)]
    seen = set()
    for no, toks in lines:
        if toks[0][1] != "dist" or len(toks) != 4:
            raise ParseError(no, toks[0][0], "expected 'dist <a> <b> <value>'")
        a, b = _int(no, toks[1]), _int(no, toks[2])
        for tok, x in ((toks[1], a), (toks[2], b)):
            if not 0 <= x < k:
                raise ParseError(no, tok[0], f"point {x} out of range")
        if a == b:
            raise ParseError(no, toks[1][0], "loop")
        rows[a][b] = rows[b][a] = _rat(no, toks[3])
        seen.add((min(a, b), max(a, b)))
    for a in range(k):
        for b in range(a + 1, k):
            if (a, b) not in seen:
                raise ParseError(1, 1, f"missing distance for pair {(a, b)}")
    return DistanceMatrix(rows)


def dump_metric(d: DistanceMatrix) -> str:
    lines = [f"metric {d.n}"]
    for a in range(d.n):
        for b in range(a + 1, d.n):
            lines.append(f"dist {a} {b} {format_rational(d[a, b])}")
    return "\n".join(lines) + "\n"


def header_keyword(text: str):
    for _, toks in _tokens(text):
        return toks[0][1]
    return None


# -- Graphviz ---------------------------------------------------------------------


def graph_to_dot(g: Graph, orientation=None, labels=None, edge_labels=None, name="G") -> str:
    directed = orientation is not None
    lines = [f"{'digraph' if directed else 'graph'} {name} {{"]
    for v in range(g.n):
        text = str(labels[v]) if labels is not None else str(v)
        lines.append(f'  {v} [label="{text}"];')
    arrow = "->" if directed else "--"
    pairs = orientation.direction if directed else g.edges
    for e, (a, b) in enumerate(pairs):
        attrs = []
        w = g.weight(a, b)
        extra = edge_labels[e] if edge_labels is not None else None
        if w != 1 or extra is not None:
            text = " ".join(x for x in (extra, None if w == 1 else format_rational(w)) if x)
            attrs.append(f'label="{text}"')
        tail = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {a} {arrow} {b}{tail};")
    lines.append("}")
    return "\n".join(lines) + "\n"
