"""Batch command line front-end.

Subcommands: construct, verify, solve, bounds, imc, certify, table.  Results
go to stdout, diagnostics to stderr, and every run echoes its resolved
configuration on stderr.  Exit codes: 0 success, 1 usage, 2 claim refuted,
3 budget exhausted, 4 precondition failed.

The default search budget is 50 million nodes; override it with --budget or
the INDTRANS_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bounds as bnd
from . import constructions as cons
from . import imc as engine
from .errors import (
    BudgetExhausted,
    ClaimRefuted,
    ConstructionError,
    GraphError,
    HypothesisError,
    PreconditionError,
)
from .graph import MultipartiteGraph, parse, serialize
from .solver import Budget, has_it_of_size, max_partial_it

DEFAULT_BUDGET = 50_000_000
BUDGET_ENV = "INDTRANS_BUDGET"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REFUTED = 2
EXIT_BUDGET = 3
EXIT_PRECONDITION = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _load_graph(path: str) -> MultipartiteGraph:
    return parse(Path(path).read_text(encoding="utf-8"))


def _budget(args) -> Budget:
    limit = args.budget
    if limit is None:
        env = os.environ.get(BUDGET_ENV)
        limit = int(env) if env else DEFAULT_BUDGET
    return Budget(limit)


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def render_markdown(headers: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |"]
    lines.append("|" + "|".join(" --- " for _ in headers) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_csv(headers: list[str], rows: list[list[str]]) -> str:
    def cell(x: str) -> str:
        if any(ch in x for ch in ',"\n'):
            return '"' + x.replace('"', '""') + '"'
        return x

    lines = [",".join(cell(h) for h in headers)]
    lines.extend(",".join(cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _render(args, headers, rows) -> str:
    if args.format == "csv":
        return render_csv(headers, rows)
    return render_markdown(headers, rows)


def _echo_config(args) -> None:
    pairs = sorted((k, v) for k, v in vars(args).items() if k != "func")
    print("config " + " ".join(f"{k}={v}" for k, v in pairs), file=sys.stderr)


# -- subcommands ---------------------------------------------------------------


def _cmd_construct(args) -> int:
    text = args.recipe
    if Path(text).is_file():
        text = Path(text).read_text(encoding="utf-8")
    recipe = cons.parse_recipe(text)
    graph, claim = cons.build(recipe)
    out = Path(args.out)
    out.write_text(serialize(graph), encoding="utf-8")
    sidecar = out.with_suffix(out.suffix + ".claim")
    sidecar.write_text(
        f"claim {claim.parts} {claim.defect} {claim.class_size} {claim.max_degree}\n"
        f"status {'trusted' if claim.trusted else 'derived'}\n"
        + cons.serialize_recipe(recipe),
        encoding="utf-8",
    )
    print(f"wrote {out} ({graph.parts} classes, {len(graph.edges)} edges)")
    print(f"claim parts={claim.parts} defect={claim.defect} size={claim.class_size} delta={claim.max_degree}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    r, defect, size, delta = (int(x) for x in args.claim.split(","))
    claim = cons.Claim(r, defect, size, delta)
    measured = cons.verify_claim(g, claim, _budget(args))
    print(f"certified parts={r} defect={defect} size={size} delta={delta} measured-max-it={measured}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    budget = _budget(args)
    res = max_partial_it(g, budget)
    print(f"max-partial-it {res.size}")
    for p in res.witness:
        print(f"pick {p.part} {p.index}")
    print(f"exhaustive {'true' if res.exhaustive else 'false'}")
    if args.defect is not None:
        want = g.parts - args.defect
        witness = has_it_of_size(g, want, budget)
        print(f"defect-transversal size={want} {'present' if witness is not None else 'absent'}")
        if witness is not None:
            for p in witness:
                print(f"pick {p.part} {p.index}")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    rs = _parse_range(args.r)
    ds = _parse_range(args.d)
    deltas = _parse_range(args.delta)
    if not args.grid and (len(rs) > 1 or len(ds) > 1 or len(deltas) > 1):
        raise _UsageError("ranges need --grid")
    headers = ["r", "d", "delta", "lower", "upper", "exact", "lower_by", "upper_by", "exact_by"]
    rows = []
    for r in rs:
        for d in ds:
            if args.grid and (r < 2 or not 0 <= d < r):
                continue
            for delta in deltas:
                rep = bnd.summary(r, d, delta)
                rows.append(
                    [
                        str(r),
                        str(d),
                        str(delta),
                        str(rep.lower),
                        str(rep.upper),
                        "yes" if rep.exact else "no",
                        ";".join(rep.lower_tags),
                        ";".join(rep.upper_tags),
                        ";".join(rep.exact_tags),
                    ]
                )
    sys.stdout.write(_render(args, headers, rows))
    return EXIT_OK


def _cmd_imc(args) -> int:
    g = _load_graph(args.graph)
    budget = _budget(args)
    if args.critical_edge:
        p1, i1, p2, i2 = (int(x) for x in args.critical_edge.split(","))
        record = engine.imc_through_edge(g, args.d, ((p1, i1), (p2, i2)), budget=budget)
    else:
        record = engine.extract_imc(g, args.d, budget=budget)
    sys.stdout.write(engine.format_record(record))
    if args.check_lemmas:
        for result in engine.check_structure(record, budget=budget):
            detail = f" {result.detail}" if result.detail else ""
            print(f"check {result.name} {result.status.value}{detail}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    g = _load_graph(args.graph)
    budget = _budget(args)
    res = max_partial_it(g, budget)
    if res.size == g.parts:
        print("full-transversal present")
        for p in res.witness:
            print(f"pick {p.part} {p.index}")
        return EXIT_PRECONDITION
    parts, edges = engine.no_transversal_certificate(g, budget)
    sys.stdout.write(engine.format_certificate(g, parts, edges))
    return EXIT_OK


def _cmd_table(args) -> int:
    if args.preset != "f65":
        raise _UsageError(f"unknown preset {args.preset!r}")
    budget = _budget(args)
    headers = ["delta", "classes", "class_size", "formula", "measured_max_it", "claimed_max_it", "certified"]
    rows = []
    for delta in _parse_range(args.delta):
        recipe = cons.RowsPlusSpine(cons.Kdd(delta), 3)
        certified = cons.certify(recipe, budget)
        claim = certified.claim
        rows.append(
            [
                str(delta),
                str(claim.parts),
                str(claim.class_size),
                str((5 * delta) // 4),
                str(certified.measured_max_it),
                str(claim.max_transversal),
                "yes",
            ]
        )
    sys.stdout.write(_render(args, headers, rows))
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="indtrans", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--budget", type=int, default=None, help="search node budget")
        p.add_argument("--format", choices=["md", "csv"], default="md")

    p = sub.add_parser("construct", help="build a recipe and write the graph plus claim sidecar")
    p.add_argument("--recipe", required=True, help="recipe file or inline text ('recipe 1; 0 kdd 4; ...')")
    p.add_argument("--out", required=True, help="output MPG path")
    common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="certify a claim r,D,n,delta against a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--claim", required=True, help="comma-separated r,D,n,delta")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("solve", help="maximum partial transversal, optionally a defect decision")
    p.add_argument("--graph", required=True)
    p.add_argument("--defect", type=int, default=None)
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bounds", help="evaluate the bound formulas at one point or a grid")
    p.add_argument("--r", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--grid", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("imc", help="run the configuration extraction pipeline")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--check-lemmas", action="store_true")
    p.add_argument("--critical-edge", default=None, help="p1,i1,p2,i2")
    common(p)
    p.set_defaults(func=_cmd_imc)

    p = sub.add_parser("certify", help="emit a blocking certificate or report a full transversal")
    p.add_argument("--graph", required=True)
    common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("table", help="reproduce a preset construction-versus-formula table")
    p.add_argument("--preset", required=True)
    p.add_argument("--delta", required=True, help="value or range lo..hi")
    common(p)
    p.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _echo_config(args)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClaimRefuted as exc:
        print(f"refuted: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except BudgetExhausted as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PreconditionError, ConstructionError, HypothesisError, GraphError, FileNotFoundError) as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
