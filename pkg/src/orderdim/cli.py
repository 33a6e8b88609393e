"""``orderdim`` command line.

Streams are sequences of sections, each opened by a header line naming its
kind (``graph``, ``poset``, ``embedding``, ``colouring``, ``realizer``), so
commands compose through pipes::

    orderdim gen fixture-h | orderdim realize --augment=false | orderdim verify

Exit codes: 1 parse/validation error, 2 not outerplanar / infeasible,
3 verification failure, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

from .dimension import DimensionBudgetExceeded, exact_dimension
from .fixtures import fixture_fig2, fixture_h, fixture_h_colouring, fixture_h_embedding
from .graph import (
    PENDANT_SUFFIX,
    Colouring,
    Graph,
    GraphFormatError,
    add_private_neighbours,
    gen_knn_minus_pm,
    gen_random_outerplanar,
    parse_graph,
    serialize_graph,
)
from .outerplanar import Embedding, NotOuterplanar, find_embedding, parse_embedding, three_colour
from .poset import (
    Poset,
    _bits,
    build_adjacency_poset,
    gen_standard_example,
    parse_extension,
    parse_poset,
    serialize_extension,
    serialize_poset,
)
from .realizer import build_realizer, verify_realizer

HEADERS = ("graph", "poset", "embedding", "colouring", "realizer")

EXIT_PARSE, EXIT_INFEASIBLE, EXIT_VERIFY, EXIT_BUDGET = 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, status: int = EXIT_PARSE):
        super().__init__(message)
        self.status = status


# -- stream sections ---------------------------------------------------------

def split_sections(text: str, default: str) -> dict[str, str]:
    """Map header -> body.  Text before any header belongs to ``default``."""
    out: dict[str, list[str]] = {}
    current = default
    for line in text.splitlines():
        word = line.strip()
        if word in HEADERS:
            current = word
            if current in out:
                raise CliError(f"repeated {current!r} section")
            out[current] = []
            continue
        out.setdefault(current, []).append(line)
    return {k: "\n".join(v) + "\n" for k, v in out.items() if k != default or any(s.strip() for s in v)}


def sniff(text: str) -> str:
    """Kind of headerless text: ``graph`` for v/e lines, else ``poset``."""
    for line in text.splitlines():
        parts = line.split()
        if parts and not parts[0].startswith("#"):
            return "graph" if parts[0] in ("v", "e") else "poset"
    return "poset"


def section(kind: str, body: str) -> str:
    return f"{kind}\n{body}"


def parse_colouring(g: Graph, text: str) -> Colouring:
    classes = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 3 or parts[0] != "c" or not parts[2].isdigit():
            raise GraphFormatError(f"malformed colouring line {raw!r}", lineno)
        classes[parts[1]] = int(parts[2])
    return Colouring(g, classes)


def parse_realizer(text: str) -> list[list[str]]:
    return [parse_extension(line) for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]


def serialize_realizer(r) -> str:
    return "".join(serialize_extension(ext) + "\n" for ext in r)


def augment_embedding(e: Embedding) -> Embedding:
    """Layout of the augmented graph: each pendant right after its vertex."""
    return Embedding([w for v in e.order for w in (v, v + PENDANT_SUFFIX)])


def hasse_dot(p: Poset) -> str:
    els = p.elements
    lines = ["digraph poset {", "  rankdir=BT;"]
    lines += [f'  "{x}";' for x in els]
    for i in range(len(els)):
        for j in _bits(p.up[i]):
            if not p.up[i] & p.down[j]:
                lines.append(f'  "{els[i]}" -> "{els[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_dot(g: Graph) -> str:
    lines = ["graph G {"] + [f'  "{v}";' for v in g.vertices]
    lines += [f'  "{u}" -- "{w}";' for u, w in g.sorted_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _graph(secs) -> Graph:
    if "graph" not in secs:
        raise CliError("input has no graph section")
    return parse_graph(secs["graph"])


def _embed(g: Graph) -> Embedding:
    try:
        return find_embedding(g)
    except NotOuterplanar as exc:
        raise CliError(f"not outerplanar: {exc}", EXIT_INFEASIBLE) from exc


def cmd_check(args, out) -> int:
    g = _graph(split_sections(_read(args.input), "graph"))
    e = _embed(g)
    out.write(f"outerplanar: {len(g)} vertices, {len(g.edges)} edges\n")
    out.write(section("embedding", e.to_text()))
    return 0


def cmd_embed(args, out) -> int:
    g = _graph(split_sections(_read(args.input), "graph"))
    out.write(section("embedding", _embed(g).to_text()))
    return 0


def cmd_color(args, out) -> int:
    g = _graph(split_sections(_read(args.input), "graph"))
    try:
        c = three_colour(g)
    except ValueError as exc:
        raise CliError(f"infeasible: {exc}", EXIT_INFEASIBLE) from exc
    out.write(section("colouring", c.to_text()))
    return 0


def cmd_adjposet(args, out) -> int:
    g = _graph(split_sections(_read(args.input), "graph"))
    out.write(section("poset", serialize_poset(build_adjacency_poset(g))))
    return 0


def cmd_realize(args, out) -> int:
    secs = split_sections(_read(args.input), "graph")
    g = _graph(secs)
    e = parse_embedding(secs["embedding"]) if "embedding" in secs else None
    c = parse_colouring(g, secs["colouring"]) if "colouring" in secs else None
    if e is not None:
        e.check(g)
    if args.augment:
        g = add_private_neighbours(g)
        e = augment_embedding(e) if e is not None else None
        c = None
    if e is None:
        e = _embed(g)
    if c is None:
        c = three_colour(g)
    r = build_realizer(g, e, c)
    out.write(section("poset", serialize_poset(build_adjacency_poset(g))))
    out.write(section("realizer", serialize_realizer(r)))
    return 0


def cmd_verify(args, out) -> int:
    secs = split_sections(_read(args.input), "realizer")
    if args.poset:
        ptext = _read(args.poset)
        psecs = split_sections(ptext, sniff(ptext))
        if "poset" in psecs:
            p = parse_poset(psecs["poset"])
        else:
            p = build_adjacency_poset(_graph(psecs))
    elif "poset" in secs:
        p = parse_poset(secs["poset"])
    elif "graph" in secs:
        p = build_adjacency_poset(parse_graph(secs["graph"]))
    else:
        raise CliError("no poset to verify against (use --poset or a poset section)")
    if "realizer" not in secs:
        raise CliError("input has no realizer section")
    try:
        report = verify_realizer(p, parse_realizer(secs["realizer"]))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out.write(report.to_text())
    return 0 if report.passed else EXIT_VERIFY


def cmd_dim(args, out) -> int:
    text = _read(args.input)
    secs = split_sections(text, sniff(text))
    if "poset" in secs:
        p = parse_poset(secs["poset"])
    else:
        p = build_adjacency_poset(_graph(secs))
    try:
        cert = exact_dimension(p, budget_ms=args.budget_ms, jobs=args.jobs)
    except DimensionBudgetExceeded as exc:
        out.write(f"budget exceeded: {exc.lower} <= dim <= {exc.upper}\n")
        out.write(f"searched {exc.stats.nodes} nodes in {exc.stats.elapsed:.3f}s\n")
        return EXIT_BUDGET
    out.write(cert.report())
    return 0


def cmd_gen(args, out) -> int:
    what, rest = args.what, args.params
    try:
        if what == "fixture-h":
            _no_params(what, rest, 0)
            out.write(section("graph", serialize_graph(fixture_h())))
            out.write(section("embedding", fixture_h_embedding().to_text()))
            out.write(section("colouring", fixture_h_colouring().to_text()))
        elif what == "fixture-fig2":
            _no_params(what, rest, 0)
            out.write(section("poset", serialize_poset(fixture_fig2())))
        elif what == "knn-minus-pm":
            _no_params(what, rest, 1)
            out.write(section("graph", serialize_graph(gen_knn_minus_pm(int(rest[0])))))
        elif what == "random":
            _no_params(what, rest, 2)
            g = gen_random_outerplanar(int(rest[0]), float(rest[1]), args.seed)
            out.write(section("graph", serialize_graph(g)))
        elif what.startswith("s") and what[1:].isdigit():
            _no_params(what, rest, 0)
            out.write(section("poset", serialize_poset(gen_standard_example(int(what[1:])))))
        else:
            raise CliError(f"unknown generator {what!r}")
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return 0


def _no_params(what: str, rest, k: int) -> None:
    if len(rest) != k:
        raise CliError(f"gen {what} takes {k} parameter(s), got {len(rest)}")


def cmd_export_dot(args, out) -> int:
    secs = split_sections(_read(args.input), "graph")
    if "poset" in secs:
        p = parse_poset(secs["poset"])
        out.write(hasse_dot(p) if args.format == "dot" else section("poset", serialize_poset(p)))
    else:
        g = _graph(secs)
        out.write(graph_dot(g) if args.format == "dot" else section("graph", serialize_graph(g)))
    return 0


# -- entry point -------------------------------------------------------------

def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orderdim", description="Adjacency posets of outerplanar graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_input(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", nargs="?", default="-", help="input file (default: stdin)")
        sp.set_defaults(func=func)
        return sp

    with_input("check", cmd_check, "test outerplanarity (exit 2 if not)")
    with_input("embed", cmd_embed, "crossing-free line layout")
    with_input("color", cmd_color, "proper 3-colouring")
    with_input("adjposet", cmd_adjposet, "adjacency poset of a graph")
    sp = with_input("realize", cmd_realize, "poset and its four-extension realizer")
    sp.add_argument("--augment", type=_bool, nargs="?", const=True, default=True,
                    help="attach private neighbours first (default: true)")
    sp = with_input("verify", cmd_verify, "check a realizer (exit 3 on failure)")
    sp.add_argument("--poset", help="file with the poset (or graph) to verify against")
    sp = with_input("dim", cmd_dim, "exact dimension with certificate")
    sp.add_argument("--budget-ms", type=int, default=60_000)
    sp.add_argument("--jobs", type=int, default=1)
    sp = sub.add_parser("gen", help="s<n> | knn-minus-pm <n> | random <n> <density> | fixture-h | fixture-fig2")
    sp.add_argument("what")
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_gen)
    sp = with_input("export-dot", cmd_export_dot, "Graphviz text for a graph or a poset's Hasse diagram")
    sp.add_argument("--format", choices=("text", "dot"), default="dot")
    return ap


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"orderdim: {exc}", file=sys.stderr)
        return exc.status
    except (GraphFormatError, ValueError, KeyError) as exc:
        print(f"orderdim: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
