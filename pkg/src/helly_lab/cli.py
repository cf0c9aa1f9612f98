"""Command-line front end.

Exit codes: 0 all checks pass, 1 a predicate is false or a claim refuted,
2 usage or parse error, 3 budget exceeded, 4 two independent routes
disagree (always a bug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .bounds import BOUNDS, BoundTable
from .constructions import CONSTRUCTIONS, ConstructionSpec, build
from .errors import BudgetExceeded, CanonicalLabelError, DomainError, HellyLabError, InconsistencyError
from .family import SetFamily, complement_family, parse_family, serialize_family, triviality
from .graph import (
    Graph,
    common_neighborhood_clique_ok,
    common_neighborhood_size_ok,
    eccentricity_profile,
    has_triangle_property,
    is_connected,
    parse_graph,
    serialize_graph,
)
from .helly import (
    find_r_simplex,
    find_special_simplex,
    has_pq_property,
    is_intersection_q_efficient,
    is_k4_3_free,
    is_q_helly_berge_duchet,
    is_q_helly_bruteforce,
    is_union_q_efficient,
)
from .matching import all_covering_subgraphs_have_pm, has_perfect_matching
from .presets import PRESETS
from .report import PropertyReport, certify, helly_witness, members_of, vertices_of
from .search import max_covering_pm_graph, max_union_q_efficient, min_edge_graph

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET, EXIT_BUG = 0, 1, 2, 3, 4

log = logging.getLogger("helly_lab")


def _env_budget() -> int | None:
    env = os.environ.get("HELLY_LAB_BUDGET")
    return int(env) if env else None


def _need_q(args) -> int:
    if args.q is None:
        raise DomainError("this check needs --q")
    return args.q


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out and args.command != "construct":
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ------------------------------------------------------------------ check


def _helly_routes(family: SetFamily, q: int, method: str, budget):
    """Run the requested q-Helly route(s); 'both' must agree."""
    verdicts = {}
    if method in ("bruteforce", "both"):
        verdicts["bruteforce"] = is_q_helly_bruteforce(family, q, budget)
    if method in ("berge-duchet", "both"):
        verdicts["berge-duchet"] = is_q_helly_berge_duchet(family, q)
    holds = {v.holds for v in verdicts.values()}
    if len(holds) > 1:
        raise InconsistencyError(f"q-Helly routes disagree on q={q}: {verdicts}")
    return verdicts


def check_family(args) -> PropertyReport:
    family = parse_family(Path(args.path).read_text())
    rep = PropertyReport.for_family(family, Path(args.path).name)
    budget = args.budget
    ran = False

    if args.helly:
        ran = True
        q = _need_q(args)

        def run():
            vs = _helly_routes(family, q, args.method, budget)
            first = next(iter(vs.values()))
            return first.holds, {name: helly_witness(family, v) for name, v in vs.items()} if not first.holds else None

        rep.run("q_helly", {"q": q, "method": args.method}, run)
    if args.union_efficient:
        ran = True
        q = _need_q(args)

        def run():
            out = {}
            if args.method in ("bruteforce", "both"):
                v = is_union_q_efficient(family, q, budget)
                out["bruteforce"] = (v.holds, None if v.holds else {"cover": members_of(family, v.witness)})
            if args.method in ("berge-duchet", "both"):
                comp = complement_family(family)
                v = is_q_helly_berge_duchet(comp, q)
                out["berge-duchet"] = (v.holds, helly_witness(comp, v))
            if len({h for h, _ in out.values()}) > 1:
                raise InconsistencyError(f"union-efficiency routes disagree on q={q}")
            holds = next(iter(out.values()))[0]
            return holds, None if holds else {k: w for k, (_, w) in out.items()}

        rep.run("union_efficient", {"q": q, "method": args.method}, run)
    if args.intersection_efficient:
        ran = True
        q = _need_q(args)

        def run():
            v = is_intersection_q_efficient(family, q, budget)
            if args.method == "both" and is_q_helly_berge_duchet(family, q).holds != v.holds:
                raise InconsistencyError(f"intersection-efficiency and q-Helly disagree on q={q}")
            return v.holds, None if v.holds else {"subfamily": members_of(family, v.witness)}

        rep.run("intersection_efficient", {"q": q, "method": args.method}, run)
    if args.simplex is not None:
        ran = True

        def run():
            w = find_r_simplex(family, args.simplex)
            return w is None, None if w is None else members_of(family, w.members)

        rep.run("no_r_simplex", {"r": args.simplex}, run)
    if args.special_simplex:
        ran = True
        q = _need_q(args)

        def run():
            found = find_special_simplex(family, q)
            if found is None:
                return False, None
            idx, core = found
            return True, {"members": members_of(family, idx), "core": [b + 1 for b in range(family.n) if core >> b & 1]}

        rep.run("special_simplex", {"q": q}, run)
    if args.k4_free:
        ran = True
        rep.run("k4_3_free", {}, lambda: (is_k4_3_free(family), None))
    if args.pq is not None:
        ran = True
        q = _need_q(args)
        rep.run("pq_property", {"p": args.pq, "q": q}, lambda: (has_pq_property(family, args.pq, q), None))
    if args.nontrivial:
        ran = True
        t = triviality(family)
        rep.record("nontrivial", {}, not (t.intersection_trivial or t.union_trivial),
                   {"intersection_trivial": t.intersection_trivial, "union_trivial": t.union_trivial})
    if not ran:
        raise DomainError("no family check requested")
    return rep


def check_graph(args) -> PropertyReport:
    g = parse_graph(Path(args.path).read_text())
    rep = PropertyReport.for_graph(g, Path(args.path).name)
    ran = False

    def profile():
        prof = eccentricity_profile(g)
        return {"radius": _num(prof.radius), "diameter": _num(prof.diameter)}, prof

    if args.two_self_centered:
        ran = True

        def run():
            info, prof = profile()
            return prof.radius == 2 and prof.diameter == 2, info

        rep.run("two_self_centered", {}, run)
    if args.radius_two:
        ran = True

        def run():
            info, prof = profile()
            return prof.radius == 2, info

        rep.run("radius_two", {}, run)
    if args.triangle_property:
        ran = True

        def run():
            ok = has_triangle_property(g)
            bad = None if ok else next([u + 1, v + 1] for u, v in g.edges() if not g.adj[u] & g.adj[v])
            return ok, bad

        rep.run("triangle_property", {}, run)
    if args.clique_cn is not None:
        ran = True

        def run():
            c = common_neighborhood_clique_ok(g, args.clique_cn)
            return c.ok, vertices_of(c.witness)

        rep.run("clique_common_neighborhoods", {"t": args.clique_cn}, run)
    if args.size_cn is not None:
        ran = True

        def run():
            c = common_neighborhood_size_ok(g, args.size_cn)
            return c.ok, vertices_of(c.witness)

        rep.run("size_common_neighborhoods", {"t": args.size_cn}, run)
    if args.min_degree is not None:
        ran = True
        rep.run("min_degree", {"d": args.min_degree}, lambda: (min(g.degrees()) == args.min_degree, min(g.degrees())))
    if args.perfect_matching:
        ran = True

        def run():
            a = has_perfect_matching(g, "blossom")
            if args.method == "both" and g.n <= 24 and has_perfect_matching(g, "recursion") != a:
                raise InconsistencyError("matching routes disagree")
            return a, None

        rep.run("perfect_matching", {}, run)
    if args.covering_pm:
        ran = True

        def run():
            c = all_covering_subgraphs_have_pm(g)
            return c.ok, None if c.ok else [[u + 1, v + 1] for u, v in c.witness]

        rep.run("covering_subgraphs_have_pm", {}, run)
    if args.connected:
        ran = True
        rep.run("connected", {}, lambda: (is_connected(g), None))
    if not ran:
        raise DomainError("no graph check requested")
    return rep


def _num(x):
    return "inf" if x == float("inf") else int(x)


def cmd_check(args) -> int:
    rep = check_family(args) if args.subject == "family" else check_graph(args)
    _emit(args, rep.to_json(args.timings))
    return EXIT_OK if rep.passed else EXIT_FALSE


# -------------------------------------------------------- construct/bound


def cmd_construct(args) -> int:
    params = {"n": args.n, "q": args.q, "k": args.k, "i": args.i}
    if args.parts:
        params["parts"] = [int(x) for x in args.parts.split(",")]
    obj = build(ConstructionSpec(args.name, params))
    rep = certify(args.name, obj, params)
    if isinstance(obj, SetFamily):
        notes = [f"{args.name} {' '.join(f'{k}={v}' for k, v in sorted(params.items()) if v is not None)}"]
        if args.name == "simplex-free":
            notes.append("members are complements of the k-sets meeting [q+2] in at most one element")
        text = serialize_family(obj, notes)
    else:
        text = serialize_graph(obj)
    if args.output:
        Path(args.output).write_text(text)
        print(rep.to_json(args.timings))
    else:
        sys.stdout.write(text)
        sys.stderr.write(rep.to_json(args.timings) + "\n")
    return EXIT_OK if rep.passed else EXIT_FALSE


def cmd_bound(args) -> int:
    table = BoundTable.evaluate(args.names, n=args.n, k=args.k, q=args.q, x=args.x)
    _emit(args, table.to_json())
    return EXIT_OK


# ----------------------------------------------------------------- search


def cmd_search(args) -> int:
    budget = args.budget
    if args.kind == "max-family":
        for p in ("n", "k", "q"):
            if getattr(args, p) is None:
                raise DomainError(f"max-family needs --{p}")
        res = max_union_q_efficient(
            args.n, args.k, args.q, not args.allow_trivial,
            jobs=args.jobs, budget=budget, checkpoint=args.resume,
        )
    elif args.kind == "max-pm-graph":
        res = max_covering_pm_graph(_need_q(args), not args.allow_disconnected, budget=budget)
    else:
        if args.n is None or args.hypothesis is None:
            raise DomainError("min-edge-graph needs --n and --hypothesis")
        res = min_edge_graph(
            args.n, args.hypothesis, args.stream, max_edges=args.max_edges,
            jobs=args.jobs, budget=budget, checkpoint=args.resume,
        )
    _emit(args, res.to_json(args.timings))
    return EXIT_OK if res.exhaustive else EXIT_BUDGET


# ----------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    names = list(PRESETS) if args.preset == "all" else [args.preset]
    outcomes = [PRESETS[name](jobs=args.jobs) for name in names]
    payload = outcomes[0].to_dict() if len(outcomes) == 1 else {"presets": [o.to_dict() for o in outcomes]}
    _emit(args, json.dumps(payload, indent=2, sort_keys=True))
    for o in outcomes:
        for item in o.items:
            if not item.ok:
                sys.stderr.write(f"FAIL {o.preset}: {item.name} {item.detail}\n")
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FALSE


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("-o", "--output", help="write the result to this path")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--timings", action="store_true", help="include wall times (breaks byte-determinism)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="helly-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="test predicates on a family or graph file")
    check.add_argument("subject", choices=["family", "graph"])
    check.add_argument("path")
    _common(check)
    check.add_argument("--method", choices=["bruteforce", "berge-duchet", "both"], default="both")
    check.add_argument("--budget", type=int, default=_env_budget(), help="brute-force member budget")
    check.add_argument("--helly", action="store_true")
    check.add_argument("--union-efficient", action="store_true")
    check.add_argument("--intersection-efficient", action="store_true")
    check.add_argument("--simplex", type=int, metavar="R", help="assert no R-simplex")
    check.add_argument("--special-simplex", action="store_true")
    check.add_argument("--k4-free", action="store_true")
    check.add_argument("--pq", type=int, metavar="P", help="(P, q) property")
    check.add_argument("--nontrivial", action="store_true")
    check.add_argument("--two-self-centered", action="store_true")
    check.add_argument("--radius-two", action="store_true")
    check.add_argument("--triangle-property", action="store_true")
    check.add_argument("--clique-cn", type=int, metavar="T")
    check.add_argument("--size-cn", type=int, metavar="T")
    check.add_argument("--min-degree", type=int, metavar="D")
    check.add_argument("--perfect-matching", action="store_true")
    check.add_argument("--covering-pm", action="store_true")
    check.add_argument("--connected", action="store_true")
    check.set_defaults(func=cmd_check)

    con = sub.add_parser("construct", help="build a named construction and certify it")
    con.add_argument("name", choices=sorted(CONSTRUCTIONS))
    _common(con)
    con.add_argument("--i", type=int, help="centre element of the star family")
    con.add_argument("--parts", help="comma-separated part sizes for layered-extremal")
    con.set_defaults(func=cmd_construct)

    bnd = sub.add_parser("bound", help="evaluate closed-form bounds")
    bnd.add_argument("names", nargs="+", choices=sorted(BOUNDS))
    _common(bnd)
    bnd.add_argument("--x", type=int)
    bnd.set_defaults(func=cmd_bound)

    srch = sub.add_parser("search", help="exhaustive extremal search")
    srch.add_argument("kind", choices=["max-family", "max-pm-graph", "min-edge-graph"])
    _common(srch)
    srch.add_argument("--hypothesis")
    srch.add_argument("--stream", help="graph6 file to filter instead of enumerating ('-' for stdin)")
    srch.add_argument("--max-edges", type=int)
    srch.add_argument("--allow-trivial", action="store_true")
    srch.add_argument("--allow-disconnected", action="store_true")
    srch.add_argument("--jobs", type=int, default=1)
    srch.add_argument("--budget", type=int, default=_env_budget(), help="node limit")
    srch.add_argument("--resume", metavar="PATH", help="checkpoint file, created or resumed")
    srch.set_defaults(func=cmd_search)

    ver = sub.add_parser("verify", help="run a named verification bundle")
    ver.add_argument("preset", choices=sorted(PRESETS) + ["all"])
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("-o", "--output")
    ver.add_argument("--timings", action="store_true")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InconsistencyError as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return EXIT_BUG
    except (BudgetExceeded, CanonicalLabelError) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (ValueError, OSError, HellyLabError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
