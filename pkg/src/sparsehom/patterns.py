"""Subgraph and homomorphism counting pipelines with strategy selection.

``plan`` expands a pattern into its spasm and gives every quotient a witness:
a matched elimination tree (constant-space mode, counted by the tree walk) or
a matched tree decomposition (poly-space mode, counted by a circuit).  The
exact search runs with the budget that keeps the advertised exponent
(depth 6, width 3); quotients beyond it fall back to lifting an ordinary
decomposition, and the plan reports the worse exponent.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .canon import canonical_form
from .decomp import (
    DecompositionError,
    EliminationTree,
    TreeDecomposition,
    WorkLimitExceeded,
    exact_mtd,
    exact_td,
    lift_td_to_mtd,
    lift_tw_to_mtw,
    mtw_at_most,
    verify_matched_elim_tree,
    verify_matched_td,
)
from .decomp.treedecomp import attach_certificates, exact_tw, make_td
from .decomp.minors import treewidth_upper_bound
from .graph import Graph, bits
from .homcount.alg1 import count_hom_mtd
from .homcount.circuit import count_hom_mtw
from .spasm import SPASM_LIMIT, CacheFormatError, SpasmTerm, load_cache, save_cache, spasm_with_coefficients

CONST_SPACE = "const-space"
POLY_SPACE = "poly-space"
MODES = (CONST_SPACE, POLY_SPACE)
DEPTH_BUDGET = 6
WIDTH_BUDGET = 3
EXACT_LIMIT = 12


class NonIntegralCount(ArithmeticError):
    """The weighted sum of homomorphism counts is not an integer."""


def _mode(mode: str) -> str:
    aliases = {"const": CONST_SPACE, "constant-space": CONST_SPACE, "mtd": CONST_SPACE,
               "poly": POLY_SPACE, "mtw": POLY_SPACE}
    mode = aliases.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {', '.join(MODES)}")
    return mode


@dataclass(frozen=True)
class PlanEntry:
    term: SpasmTerm
    strategy: str                     # "mtd-alg1" or "mtw-circuit"
    witness: EliminationTree | TreeDecomposition
    exponent: int
    fallback: bool


@dataclass(frozen=True)
class CountPlan:
    pattern: Graph
    mode: str
    entries: tuple[PlanEntry, ...]

    @property
    def predicted_exponent(self) -> int:
        return max((e.exponent for e in self.entries), default=1)

    @property
    def fallbacks(self) -> list[PlanEntry]:
        return [e for e in self.entries if e.fallback]


# witnesses -------------------------------------------------------------------

def mtd_witness(g: Graph, budget: int | None = DEPTH_BUDGET) -> tuple[EliminationTree, bool]:
    """(matched elimination tree, used_fallback) for a connected graph with >= 2 vertices."""
    if g.vertex_count <= EXACT_LIMIT:
        res = exact_mtd(g, budget)
        if res is not None:
            return res[1], False
    _, t = exact_td(g)
    return lift_td_to_mtd(g, t), True


def mtw_witness(g: Graph, budget: int | None = WIDTH_BUDGET) -> tuple[TreeDecomposition, bool]:
    """(matched tree decomposition, used_fallback) for a graph without isolated vertices."""
    if g.vertex_count == 2:
        return attach_certificates(g, make_td([{0, 1}], [])), False
    if g.vertex_count <= EXACT_LIMIT:
        top = budget if budget is not None else g.vertex_count - 1
        try:
            for w in range(1, top + 1):
                d = mtw_at_most(g, w)
                if d is not None:
                    return attach_certificates(g, d), False
        except WorkLimitExceeded:
            pass
    if g.vertex_count <= 16:
        _, d = exact_tw(g)
    else:
        _, d = treewidth_upper_bound(g)
    return attach_certificates(g, lift_tw_to_mtw(g, d)), True


def _entry(term: SpasmTerm, mode: str) -> PlanEntry:
    g = term.quotient
    if mode == CONST_SPACE:
        t = term.mtd_witness
        fallback = False
        if t is None or not verify_matched_elim_tree(g, t):
            t, fallback = mtd_witness(g)
        depth = t.depth()
        return PlanEntry(replace(term, mtd_witness=t), "mtd-alg1", t, math.ceil(depth / 2),
                         fallback or depth > DEPTH_BUDGET)
    d = term.mtw_witness
    fallback = False
    if d is None or not verify_matched_td(g, d):
        d, fallback = mtw_witness(g)
    return PlanEntry(replace(term, mtw_witness=d), "mtw-circuit", d, math.ceil((d.width + 1) / 2),
                     fallback or d.width > WIDTH_BUDGET)


def pattern_key(g: Graph) -> str:
    return "g" + canonical_form(g).text().replace(":", "_").replace(",", ".")


def plan(pattern: Graph, mode: str = CONST_SPACE, *, cache_dir=None, use_cache: bool = True) -> CountPlan:
    """Spasm terms of ``pattern`` with witnesses for the chosen mode."""
    mode = _mode(mode)
    if pattern.vertex_count == 0 or not pattern.is_connected():
        raise ValueError("subgraph counting needs a connected, nonempty pattern")
    if pattern.vertex_count > SPASM_LIMIT:
        raise ValueError(f"subgraph counting limited to {SPASM_LIMIT} pattern vertices")
    if pattern.vertex_count == 1:
        return CountPlan(pattern, mode, ())
    key = pattern_key(pattern)
    path = None
    terms = None
    if use_cache:
        from .spasm import default_cache_dir
        path = Path(cache_dir if cache_dir is not None else default_cache_dir()) / f"{key}.spasm"
        if path.exists():
            try:
                terms = load_cache(path).get(key)
            except (CacheFormatError, DecompositionError, OSError, ValueError):
                terms = None
    fresh = terms is None
    if fresh:
        terms = spasm_with_coefficients(pattern)
    entries = tuple(_entry(t, mode) for t in terms)
    if use_cache:
        updated = [e.term for e in entries]
        if fresh or updated != list(terms):
            try:
                save_cache(path, {key: updated})
            except OSError:
                pass
    return CountPlan(pattern, mode, entries)


# counting --------------------------------------------------------------------

def _entry_homs(args) -> int:
    entry, h = args
    g = entry.term.quotient
    if entry.strategy == "mtd-alg1":
        return count_hom_mtd(g, entry.witness, h)
    return count_hom_mtw(g, entry.witness, h)


def count_subgraphs(p: CountPlan, h: Graph, threads: int = 1) -> int:
    """Number of subgraphs of h isomorphic to the plan's pattern."""
    if p.pattern.vertex_count == 1:
        return h.vertex_count
    jobs = [(e, h) for e in p.entries]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            homs = list(pool.map(_entry_homs, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        homs = [_entry_homs(j) for j in jobs]
    total = sum((e.term.coefficient * c for e, c in zip(p.entries, homs)), Fraction(0))
    if total.denominator != 1:
        raise NonIntegralCount(f"weighted homomorphism sum {total} is not an integer")
    return int(total)


def count_homs(pattern: Graph, h: Graph, mode: str = CONST_SPACE) -> int:
    """Number of homomorphisms pattern -> h, multiplied over pattern components."""
    mode = _mode(mode)
    total = 1
    for comp in pattern.components():
        g = pattern.induced(bits(comp))
        if g.vertex_count == 1:
            total *= h.vertex_count
        elif mode == CONST_SPACE:
            t, _ = mtd_witness(g, None)
            total *= count_hom_mtd(g, t, h)
        else:
            d, _ = mtw_witness(g, None)
            total *= count_hom_mtw(g, d, h)
        if total == 0:
            return 0
    return total


def default_threads() -> int:
    return os.cpu_count() or 1
