"""Command-line interface: ``sparsehom <subcommand> ...``.

Exit codes: 0 success ("found" for detect-induced), 1 "not-found" or a
witness search that failed within its budget, 2 bad input, 3 an internal
consistency failure such as a non-integral subgraph count.
"""

from __future__ import annotations

import argparse
import os
import random
import secrets
import sys

from .canon import SizeGuardError
from .decomp import DecompositionError, dump_elimtree, dump_treedecomp
from .decomp.elimtree import exact_mtd, exact_td
from .decomp.treedecomp import attach_certificates, exact_mtw, exact_tw
from .graph import Graph, GraphFormatError, dump_edge_list, load_edge_list, make_pattern
from .oracle import OracleSizeError
from .patterns import MODES, NonIntegralCount, count_homs, count_subgraphs, default_threads, plan
from .spasm import WitnessNotFound, attach_decompositions, save_cache, spasm_with_coefficients

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3
DEFAULT_SEED = 7


class InputError(Exception):
    pass


def _read_graph(spec: str, *, allow_names: bool) -> Graph:
    if spec == "-":
        return load_edge_list(sys.stdin.buffer)
    if os.path.exists(spec):
        with open(spec, "rb") as fh:
            return load_edge_list(fh)
    if allow_names:
        return make_pattern(spec)
    raise InputError(f"no such file: {spec}")


def _seed(text: str | None) -> int:
    if text is None:
        return DEFAULT_SEED
    if text == "random":
        return secrets.randbits(63)
    try:
        return int(text)
    except ValueError:
        raise InputError(f"seed must be an integer or 'random', not {text!r}") from None


def _cmd_count_sub(a) -> int:
    g = _read_graph(a.pattern, allow_names=True)
    h = _read_graph(a.host, allow_names=False)
    p = plan(g, a.mode, cache_dir=a.cache_dir, use_cache=not a.no_cache)
    print(count_subgraphs(p, h, threads=a.threads))
    return EXIT_OK


def _cmd_count_hom(a) -> int:
    g = _read_graph(a.pattern, allow_names=True)
    h = _read_graph(a.host, allow_names=False)
    print(count_homs(g, h, a.mode))
    return EXIT_OK


def _cmd_detect(a) -> int:
    from .induced.detect import detect_induced
    from .induced.recipes import RecipeError, recipe_for

    try:
        recipe = recipe_for(a.pattern)
    except RecipeError as e:
        raise InputError(str(e)) from None
    h = _read_graph(a.host, allow_names=False)
    if a.trials < 1:
        raise InputError("--trials must be positive")
    res = detect_induced(recipe, h, trials=a.trials, seed=_seed(a.seed))
    print(res)
    return EXIT_OK if res.found else EXIT_NEGATIVE


def _witness_summary(t) -> str:
    parts = []
    if t.mtd_witness is not None:
        parts.append(f"mtd-depth={t.mtd_witness.depth()}")
    if t.mtw_witness is not None:
        parts.append(f"mtw-width={t.mtw_witness.width}")
    return " ".join(parts) or "-"


def _cmd_spasm(a) -> int:
    g = _read_graph(a.pattern, allow_names=True)
    terms = spasm_with_coefficients(g)
    if a.attach:
        mode, _, budget = a.attach.partition(":")
        if mode not in ("mtd", "mtw") or not budget.isdigit():
            raise InputError("--attach takes mtd:<depth> or mtw:<width>")
        try:
            terms = attach_decompositions(terms, mode, int(budget))
        except WitnessNotFound as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_NEGATIVE
    for t in terms:
        c = t.coefficient
        print(f"{t.form.text()}\t{c.numerator}/{c.denominator}\t{_witness_summary(t)}")
    if a.out:
        save_cache(a.out, {a.pattern: terms})
    return EXIT_OK


def _cmd_analyze(a) -> int:
    g = _read_graph(a.graph, allow_names=True)
    if a.param == "mtd":
        value, witness = exact_mtd(g)
        text = dump_elimtree(witness)
    elif a.param == "td":
        value, witness = exact_td(g)
        text = dump_elimtree(witness)
    elif a.param == "mtw":
        value, witness = exact_mtw(g)
        text = dump_treedecomp(attach_certificates(g, witness), g.vertex_count)
    else:
        value, witness = exact_tw(g)
        text = dump_treedecomp(witness, g.vertex_count)
    print(value)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_gen(a) -> int:
    rng = random.Random(_seed(a.seed))
    n = a.n
    if a.kind == "gnm":
        if a.m > n * (n - 1) // 2:
            raise InputError("too many edges for the vertex count")
        edges: set[tuple[int, int]] = set()
        while len(edges) < a.m:
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = Graph.from_edges(n, sorted(edges))
    else:
        pattern = make_pattern(a.kind)
        k = pattern.vertex_count
        if n < k:
            raise InputError("host smaller than the planted pattern")
        spots = rng.sample(range(n), k)
        edges = {(min(spots[u], spots[v]), max(spots[u], spots[v])) for u, v in pattern.edges()}
        planted = set(spots)
        while len(edges) < pattern.edge_count + a.m:
            u, v = rng.randrange(n), rng.randrange(n)
            # noise never touches two planted vertices, so the copy stays induced
            if u != v and not (u in planted and v in planted):
                edges.add((min(u, v), max(u, v)))
        g = Graph.from_edges(n, sorted(edges))
    sys.stdout.write(dump_edge_list(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparsehom", description="Pattern counting and detection in sparse graphs.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def host_args(p):
        p.add_argument("--pattern", required=True, help="pattern name (e.g. cycle:5) or edge-list file")
        p.add_argument("--host", required=True, help="host edge-list file, '-' for stdin")

    p = sub.add_parser("count-sub", help="count subgraphs isomorphic to a pattern")
    host_args(p)
    p.add_argument("--mode", choices=MODES, default=MODES[0])
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=_cmd_count_sub)

    p = sub.add_parser("count-hom", help="count homomorphisms from a pattern")
    host_args(p)
    p.add_argument("--mode", choices=MODES, default=MODES[0])
    p.add_argument("--threads", type=int, default=default_threads())
    p.set_defaults(func=_cmd_count_hom)

    p = sub.add_parser("detect-induced", help="randomised induced-subgraph detection")
    host_args(p)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--seed", default=None, help="integer or 'random'")
    p.add_argument("--threads", type=int, default=default_threads())
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("spasm", help="list spasm members with coefficients")
    p.add_argument("--pattern", required=True)
    p.add_argument("--attach", default=None, help="mtd:<depth> or mtw:<width>")
    p.add_argument("--out", default=None, help="write a spasm cache file")
    p.set_defaults(func=_cmd_spasm)

    p = sub.add_parser("analyze", help="exact structural parameter with witness")
    p.add_argument("--graph", required=True)
    p.add_argument("--param", choices=("mtd", "mtw", "td", "tw"), required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("gen")  # test helper, deliberately undocumented
    p.add_argument("--kind", default="gnm", help="gnm, or a pattern name to plant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="edges (noise edges when planting)")
    p.add_argument("--seed", default=None)
    p.set_defaults(func=_cmd_gen)
    # keep gen out of the help listing
    sub._choices_actions = [c for c in sub._choices_actions if c.dest != "gen"]
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonIntegralCount as e:
        print(f"error: internal consistency failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, GraphFormatError, SizeGuardError, OracleSizeError, DecompositionError,
            ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
