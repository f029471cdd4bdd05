"""Command-line front end.

Exit codes: 0 success, 1 usage or validation error, 2 budget exhausted,
truncated enumeration, or table mismatch.

With ``--machine`` every command prints line-oriented ``key=value`` records
instead of prose.  The first line is ``format=qga-report v1``; list values
are comma separated, quivers and triangulations are emitted after a
``body=`` line in their own text formats.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__
from .blocks import construct_rn, sphere4_quiver, tn_construction, torus_planar_quiver
from .canonical import MODES
from .catalog import named
from .genus import min_genus
from .mutation_class import ExplorationLimits, cached_enumerate, enumerate_class
from .quiver import (
    Quiver,
    QuiverError,
    SimpleGraph,
    dumps_graph,
    dumps_quiver,
    loads_graph,
    mutate_sequence,
    read_quiver,
    underlying_graph,
)
from .surface import SurfaceError, dumps_triangulation, flip, read_triangulation, signed_adjacency

OK, USAGE, BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


class Output:
    """Collects prose or key=value lines depending on ``--machine``."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = ["format=qga-report v1"] if machine else []

    def kv(self, key: str, value) -> None:
        if self.machine:
            self.lines.append(f"{key}={value}")

    def text(self, line: str) -> None:
        if not self.machine:
            self.lines.append(line)

    def body(self, text: str) -> None:
        if self.machine:
            self.lines.append("body=")
        self.lines.extend(text.rstrip("\n").split("\n"))

    def emit(self) -> None:
        sys.stdout.write("\n".join(self.lines) + "\n")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_quiver(args) -> Quiver:
    if getattr(args, "name", None):
        return named(args.name).quiver
    if not getattr(args, "quiver", None):
        raise UsageError("give a quiver file with -q or a catalog name with --name")
    return read_quiver(args.quiver)


def _construct(family: str, n: int):
    if family == "rn":
        return construct_rn(n)
    if family == "tn":
        return tn_construction(n).quiver
    if family == "torus":
        return torus_planar_quiver(n)
    if family == "sphere4":
        return sphere4_quiver()
    raise UsageError(f"unknown family {family!r}")


def _parse_seq(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad vertex sequence {text!r}") from None


# -- commands --------------------------------------------------------------------

def cmd_mutate(args, out: Output) -> int:
    q = _load_quiver(args)
    seq = _parse_seq(args.sequence)
    try:
        m = mutate_sequence(q, seq)
    except IndexError as exc:
        raise UsageError(str(exc)) from None
    text = dumps_quiver(m)
    out.kv("sequence", ",".join(map(str, seq)))
    if args.output:
        _write(args.output, text)
        out.kv("written", args.output)
        out.text(f"wrote {args.output}")
    else:
        out.body(text)
    return OK


def _limits(args) -> ExplorationLimits:
    return ExplorationLimits(args.max_members, args.max_entry, args.time_budget)


def cmd_class(args, out: Output) -> int:
    q = _load_quiver(args)
    limits = _limits(args)
    if args.no_cache:
        report = enumerate_class(q, args.iso, limits, args.threads)
    else:
        report = cached_enumerate(q, args.iso, limits, workers=args.threads)
    status = "complete" if report.complete else "truncated"
    out.kv("mode", report.mode)
    out.kv("size", report.size)
    out.kv("status", status)
    if report.truncated:
        out.kv("reason", report.reason)
    out.text(f"size {report.size}, {status}" + (f" ({report.reason})" if report.truncated else ""))
    if args.members:
        for key in report.keys():
            out.kv("member", key.hex())
            out.text(f"member {key.hex()}")
            body = dumps_quiver(report.members[key])
            if not out.machine:
                out.lines.extend(body.rstrip("\n").split("\n"))
    return OK if report.complete else BUDGET


def cmd_genus(args, out: Output) -> int:
    if args.construct:
        obj = _construct(args.construct, args.n)
    elif args.graph:
        with open(args.graph, encoding="utf-8") as fh:
            obj = loads_graph(fh.read())
    else:
        obj = _load_quiver(args)
    g = obj if isinstance(obj, SimpleGraph) else underlying_graph(obj)
    res = min_genus(g, budget=args.budget, seed=args.seed)
    out.kv("vertices", g.n)
    out.kv("edges", g.num_edges)
    out.kv("status", res.status)
    out.kv("lo", res.lo)
    out.kv("hi", res.hi)
    out.kv("faces", res.faces)
    out.kv("nodes", res.nodes_explored)
    if res.exact:
        out.text(f"genus {res.genus} (exact)")
    else:
        out.text(f"genus in [{res.lo}, {res.hi}] (bounded, budget {args.budget:g}s exhausted)")
    out.text(f"faces {res.faces} in the best embedding found")
    return OK if res.exact else BUDGET


def cmd_table(args, out: Output) -> int:
    from .table import genus_table

    rows = genus_table(args.only, args.iso, genus_budget=args.genus_budget,
                       workers=args.threads, use_cache=not args.no_cache)
    out.text(f"{'type':<9} {'size':>6} {'planar':>7} {'genus1':>7}   expected")
    diffs = []
    for r in rows:
        flag = "" if r.matches else "  MISMATCH"
        extra = ""
        if r.other or r.bounded or not r.complete:
            extra = f" other={r.other} bounded={r.bounded} complete={r.complete}"
        out.text(f"{r.name:<9} {r.size:>6} {r.planar:>7} {r.genus1:>7}   "
                 f"{r.expected[0]}/{r.expected[1]}/{r.expected[2]}{flag}{extra}")
        out.kv("row", f"{r.name},{r.size},{r.planar},{r.genus1},{r.other},{r.bounded},"
                      f"{'complete' if r.complete else 'truncated'}")
        if not r.matches:
            diffs.append(r)
    out.kv("mode", args.iso)
    out.kv("mismatches", ",".join(r.name for r in diffs))
    if diffs:
        out.text(f"{len(diffs)} row(s) differ from the reference values: " + ", ".join(r.name for r in diffs))
        return BUDGET
    out.text("all rows match the reference values")
    return OK


def cmd_construct(args, out: Output) -> int:
    obj = _construct(args.family, args.n)
    text = dumps_graph(obj) if isinstance(obj, SimpleGraph) else dumps_quiver(obj)
    out.kv("family", args.family)
    out.kv("n", args.n)
    if args.output:
        _write(args.output, text)
        out.kv("written", args.output)
        out.text(f"wrote {args.output}")
    else:
        out.body(text)
    return OK


def cmd_flip(args, out: Output) -> int:
    tri = read_triangulation(args.triangulation)
    new = flip(tri, args.arc)
    text = dumps_triangulation(new)
    out.kv("arc", args.arc)
    if args.output:
        _write(args.output, text)
        out.kv("written", args.output)
        out.text(f"wrote {args.output}")
    else:
        out.body(text)
    return OK


def cmd_badj(args, out: Output) -> int:
    tri = read_triangulation(args.triangulation)
    b = signed_adjacency(tri)
    out.kv("n", b.n)
    for i, row in enumerate(b.tolist(), 1):
        out.kv(f"row{i}", ",".join(map(str, row)))
    out.text(f"B(T) ({b.n}x{b.n}):")
    for row in b.tolist():
        out.text(" ".join(f"{x:>2}" for x in row))
    out.text("quiver:")
    out.body(dumps_quiver(Quiver(b)))
    return OK


# -- parser -------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand; each
    # parser gets its own copy because parents share action objects
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", default=argparse.SUPPRESS, help="key=value output")
    common.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS,
                        help="worker processes (output unaffected)")
    return common


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qga", description="Quiver mutation classes, graph genus and surface constructions.",
                parents=[_common()])
    p.add_argument("--version", action="version", version=f"qga {__version__}")
    p.set_defaults(machine=False, threads=1)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def quiver_source(sp):
        sp.add_argument("-q", "--quiver", help="quiver file")
        sp.add_argument("--name", help="catalog quiver name instead of a file")

    sp = sub.add_parser("mutate", parents=[_common()], help="mutate a quiver along a vertex sequence")
    quiver_source(sp)
    sp.add_argument("-s", "--sequence", required=True, help="comma-separated 1-based vertices")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("class", parents=[_common()], help="enumerate a mutation class")
    quiver_source(sp)
    sp.add_argument("--iso", choices=MODES, default="quiver")
    sp.add_argument("--max-members", type=_positive_int, default=100_000)
    sp.add_argument("--max-entry", type=_positive_int, default=12)
    sp.add_argument("--time-budget", type=float, default=600.0)
    sp.add_argument("--members", action="store_true", help="list member keys and quivers")
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_class)

    sp = sub.add_parser("genus", parents=[_common()], help="minimum genus of a quiver or graph")
    quiver_source(sp)
    sp.add_argument("-g", "--graph", help="graph file")
    sp.add_argument("--construct", choices=("rn", "tn", "torus", "sphere4"))
    sp.add_argument("-n", type=_positive_int, default=1)
    sp.add_argument("--budget", type=float, default=60.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_genus)

    sp = sub.add_parser("table", parents=[_common()], help="genus-distribution table of the exceptional types")
    sp.add_argument("--only", nargs="+", metavar="NAME")
    sp.add_argument("--iso", choices=MODES, default="quiver")
    sp.add_argument("--genus-budget", type=float, default=60.0)
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("construct", parents=[_common()], help="emit R_n, T_n, torus or sphere4")
    sp.add_argument("family", choices=("rn", "tn", "torus", "sphere4"))
    sp.add_argument("-n", type=_positive_int, default=1, help="n for rn/tn, p for torus")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("flip", parents=[_common()], help="flip an arc of a triangulation")
    sp.add_argument("-t", "--triangulation", required=True)
    sp.add_argument("-a", "--arc", type=int, required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_flip)

    sp = sub.add_parser("badj", parents=[_common()], help="signed adjacency matrix of a triangulation")
    sp.add_argument("-t", "--triangulation", required=True)
    sp.set_defaults(func=cmd_badj)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.machine)
    try:
        code = args.func(args, out)
    except (UsageError, QuiverError, SurfaceError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"qga: error: {msg}\n")
        return USAGE
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
