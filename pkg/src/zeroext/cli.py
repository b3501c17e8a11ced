"""Command-line front end.

Exit codes: 0 success, 2 NP-hard classification, 3 property failure or oracle
mismatch, 4 parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .complex import ModularComplex
from .orbits import compute_orbits, quotient_graph
from .properties import PROPERTIES, run_property
from .rational import format_rational
from .solver import (
    LocationInstance,
    brute_force_solve,
    build_local_instance,
    classify,
    solve,
    solve_metric_relaxation,
    support_graph,
)
from .textio import ParseError, dump_graph, graph_to_dot, header_keyword, parse_graph, parse_instance, parse_metric
from .vcsp import build_blp

EXIT_OK, EXIT_HARD, EXIT_FAIL, EXIT_PARSE = 0, 2, 3, 4


def _jsonable(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(_jsonable(data), sort_keys=True))
    else:
        print(text)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _classification(verdict) -> dict:
    if verdict.tractable:
        return {"verdict": "tractable", "orientation": [list(a) for a in verdict.orientation.direction]}
    return {"verdict": "NP-hard", "reason": verdict.reason, "witness": verdict.witness}


def cmd_classify(args) -> int:
    text = _read(args.graph)
    if header_keyword(text) == "metric":
        sg = support_graph(parse_metric(text))
        verdict = sg.classification
        data = _classification(verdict)
        data["support_edges"] = [[u, v, sg.graph.weight(u, v)] for u, v in sg.graph.edges]
    else:
        verdict = classify(parse_graph(text))
        data = _classification(verdict)
    _emit(args, data, verdict.describe())
    return EXIT_OK if verdict.tractable else EXIT_HARD


def _load_instance(args):
    g = parse_graph(_read(args.graph))
    n, costs = parse_instance(_read(args.instance), g.n)
    return g, n, costs


def cmd_solve(args) -> int:
    g, n, costs = _load_instance(args)
    verdict = classify(g)
    if not verdict.tractable:
        print(f"cannot solve: {verdict.describe()}", file=sys.stderr)
        return EXIT_HARD
    inst = LocationInstance(ModularComplex(g, verdict.orientation), n, costs)
    if args.lp_dump:
        rho = tuple(0 for _ in range(n))
        Path(args.lp_dump).write_text(build_blp(build_local_instance(inst, rho, "+")).lp.to_lp_text())
    rep = solve(inst, args.method)
    data = {
        "value": rep.value,
        "location": list(rep.location),
        "descent_steps": rep.descent_steps,
        "scaling_phases": rep.scaling_phases,
        "blp_calls": rep.blp_calls,
        "terminal_constant": rep.terminal_constant,
        "classification": "tractable",
    }
    text = (
        f"value {format_rational(rep.value)}\nlocation {' '.join(map(str, rep.location))}\n"
        f"descent_steps {rep.descent_steps}\nscaling_phases {rep.scaling_phases}\n"
        f"blp_calls {rep.blp_calls}\nterminal_constant {format_rational(rep.terminal_constant)}"
    )
    _emit(args, data, text)
    return EXIT_OK


def cmd_relax(args) -> int:
    g, n, costs = _load_instance(args)
    value = solve_metric_relaxation(g, n, costs)
    _emit(args, {"value": value}, f"value {format_rational(value)}")
    return EXIT_OK


def cmd_orbits(args) -> int:
    g = parse_graph(_read(args.graph))
    part = compute_orbits(g)
    if args.dot:
        out = [graph_to_dot(g, edge_labels=[f"Q{q}" for q in part.orbit_of])]
        for q in range(part.orbit_count):
            qg, _ = quotient_graph(g, part.members(q))
            out.append(graph_to_dot(qg, name=f"Q{q}"))
        print("".join(out), end="")
        return EXIT_OK
    orbits = [[list(g.edges[e]) for e in sorted(part.members(q))] for q in range(part.orbit_count)]
    text = "\n".join(f"Q{q}: " + " ".join(f"{u}-{v}" for u, v in edges) for q, edges in enumerate(orbits))
    _emit(args, {"orbits": orbits}, text)
    return EXIT_OK


def cmd_orient(args) -> int:
    from .orbits import find_admissible_orientation

    g = parse_graph(_read(args.graph))
    found = find_admissible_orientation(g)
    if not found:
        _emit(args, {"orientable": False, "witness": found.witness}, f"not orientable: {found.witness}")
        return EXIT_HARD
    o = found.witness
    if args.dot:
        print(graph_to_dot(g, orientation=o), end="")
        return EXIT_OK
    arcs = [list(a) for a in o.direction]
    _emit(args, {"orientable": True, "arcs": arcs}, "\n".join(f"{t} -> {h}" for t, h in o.direction))
    return EXIT_OK


def cmd_subdivide(args) -> int:
    g = parse_graph(_read(args.graph))
    verdict = classify(g)
    if not verdict.tractable:
        print(f"cannot subdivide: {verdict.describe()}", file=sys.stderr)
        return EXIT_HARD
    sub = ModularComplex(g, verdict.orientation).subdivision
    sg = sub.complex.graph
    labels = [str(bp) for bp in sub.pairs]
    if args.dot:
        print(graph_to_dot(sg, orientation=sub.complex.orientation, labels=labels), end="")
        return EXIT_OK
    arcs = [[labels[t], labels[h], sg.weight(t, h)] for t, h in sub.complex.orientation.direction]
    table = "".join(f"# {i} = {name}\n" for i, name in enumerate(labels))
    _emit(args, {"vertices": labels, "arcs": arcs}, table + dump_graph(sg).rstrip("\n"))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = parse_graph(_read(args.graph))
    rng = random.Random(args.seed)
    res = run_property(args.property, g, rng, trials=args.trials, n=args.extras)
    status = "pass" if res.ok else "fail"
    data = {"property": args.property, "status": status, "checked": res.checked, "detail": res.detail}
    text = f"{args.property}: {status} ({res.checked} checked)"
    if not res.ok and res.detail is not None:
        text += f"\n{res.detail}"
    _emit(args, data, text)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    g, n, costs = _load_instance(args)
    verdict = classify(g)
    if not verdict.tractable:
        print(f"cannot solve: {verdict.describe()}", file=sys.stderr)
        return EXIT_HARD
    inst = LocationInstance(ModularComplex(g, verdict.orientation), n, costs)
    fast = solve(inst, args.method)
    slow = brute_force_solve(inst)
    ok = fast.value == slow.value
    data = {"method": args.method, "value": fast.value, "brute_force": slow.value, "agree": ok}
    text = f"{args.method} {format_rational(fast.value)} brute {format_rational(slow.value)} {'agree' if ok else 'MISMATCH'}"
    _emit(args, data, text)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zeroext", description="Exact minimum 0-extension solver.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help, graph=True, instance=False, dot=False):
        sp = sub.add_parser(name, help=help)
        if graph:
            sp.add_argument("graph")
        if instance:
            sp.add_argument("instance")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if dot:
            sp.add_argument("--dot", action="store_true", help="Graphviz output")
        sp.set_defaults(func=func)
        return sp

    add("classify", cmd_classify, "dichotomy verdict for a graph or metric file")
    sp = add("solve", cmd_solve, "solve a location instance", instance=True)
    sp.add_argument("--method", choices=["descent", "scaled", "blp", "brute"], default="scaled")
    sp.add_argument("--lp-dump", metavar="PATH", help="write the BLP of the first local problem")
    add("relax", cmd_relax, "value of the metric extension LP", instance=True)
    add("orbits", cmd_orbits, "orbit partition and quotients", dot=True)
    add("orient", cmd_orient, "admissible orientation or conflict witness", dot=True)
    add("subdivide", cmd_subdivide, "the 2-subdivision", dot=True)
    sp = add("verify", cmd_verify, "run a named property suite")
    sp.add_argument("--property", choices=PROPERTIES, required=True)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--extras", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("oracle", cmd_oracle, "cross-check a solver method against brute force", instance=True)
    sp.add_argument("--method", choices=["descent", "scaled", "blp"], default="scaled")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
