"""Spasm of a pattern with the coefficients that turn homomorphism counts into subgraph counts.

For a connected pattern G with automorphism group Aut(G),

    Sub(G, H) = (1/|Aut(G)|) * sum over partitions p of V(G) into independent sets of
                mu(p) * Hom(G/p, H),    mu(p) = prod over blocks of (-1)^(|b|-1) (|b|-1)!

which is Moebius inversion of injective homomorphisms over the partition lattice.
Partitions with an edge inside a block would give a loop and contribute nothing.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .canon import CanonicalForm, automorphism_count, canonical_form
from .decomp import (
    DecompositionError,
    EliminationTree,
    TreeDecomposition,
    dump_elimtree,
    dump_treedecomp,
    exact_mtd,
    mtw_at_most,
    parse_elimtree,
    parse_treedecomp,
    verify_matched_elim_tree,
    verify_matched_td,
)
from .decomp.elimtree import matched_roles
from .graph import Graph

SPASM_LIMIT = 11
CACHE_VERSION = 1


@dataclass(frozen=True)
class SpasmTerm:
    form: CanonicalForm
    coefficient: Fraction
    mtd_witness: EliminationTree | None = None
    mtw_witness: TreeDecomposition | None = None

    @property
    def quotient(self) -> Graph:
        return self.form.to_graph()


class WitnessNotFound(RuntimeError):
    def __init__(self, offenders, mode, budget):
        self.offenders = list(offenders)
        names = "; ".join(f.text() for f in self.offenders)
        super().__init__(f"no {mode} witness within {budget} for {len(self.offenders)} graph(s): {names}")


def independent_partitions(g: Graph):
    """Yield partitions of V(g) into independent sets as block-label lists.

    Restricted growth strings: vertex v joins an existing block with no
    neighbour of v, or opens the next block.
    """
    n = g.vertex_count
    label = [0] * n
    block_masks: list[int] = []
    masks = g.masks

    def rec(v: int):
        if v == n:
            yield label
            return
        nb = masks[v]
        for b in range(len(block_masks)):
            if not block_masks[b] & nb:
                block_masks[b] |= 1 << v
                label[v] = b
                yield from rec(v + 1)
                block_masks[b] &= ~(1 << v)
        block_masks.append(1 << v)
        label[v] = len(block_masks) - 1
        yield from rec(v + 1)
        block_masks.pop()

    yield from rec(0)


def _weight(sizes) -> int:
    w = 1
    for s in sizes:
        w *= (-1) ** (s - 1) * math.factorial(s - 1)
    return w


def spasm_with_coefficients(g: Graph) -> list[SpasmTerm]:
    """Spasm members with nonzero coefficients, sorted by (size, edges, form)."""
    if g.vertex_count == 0 or not g.is_connected():
        raise ValueError("spasm needs a connected, nonempty pattern")
    if g.vertex_count > SPASM_LIMIT:
        raise ValueError(f"spasm limited to {SPASM_LIMIT} vertices")
    edges = g.edges()
    by_labelled: dict[tuple, int] = {}
    for label in independent_partitions(g):
        k = max(label) + 1
        sizes = [0] * k
        for b in label:
            sizes[b] += 1
        q = frozenset((min(label[u], label[v]), max(label[u], label[v])) for u, v in edges)
        key = (k, q)
        by_labelled[key] = by_labelled.get(key, 0) + _weight(sizes)
    totals: dict[CanonicalForm, int] = {}
    for (k, q), w in by_labelled.items():
        form = canonical_form(Graph.from_edges(k, q))
        totals[form] = totals.get(form, 0) + w
    aut = automorphism_count(g)
    terms = [SpasmTerm(f, Fraction(w, aut)) for f, w in totals.items() if w != 0]
    terms.sort(key=lambda t: (t.form.vertex_count, len(t.form.edges), t.form.edges))
    return terms


def spasm_forms(g: Graph) -> set[CanonicalForm]:
    return {t.form for t in spasm_with_coefficients(g)}


# decompositions --------------------------------------------------------------

def attach_decompositions(terms, mode: str, budget: int, *, collect_all: bool = True):
    """Give every term a verified witness with depth/width <= budget.

    Raises WitnessNotFound naming every offending quotient.
    """
    if mode not in ("mtd", "mtw"):
        raise ValueError("mode must be 'mtd' or 'mtw'")
    out = []
    offenders = []
    for t in terms:
        g = t.quotient
        if mode == "mtd":
            if t.mtd_witness is not None and t.mtd_witness.depth() <= budget:
                out.append(t)
                continue
            if g.vertex_count == 1:
                offenders.append(t.form)
                continue
            res = exact_mtd(g, budget)
            if res is None:
                offenders.append(t.form)
                if not collect_all:
                    break
                continue
            assert verify_matched_elim_tree(g, res[1])
            out.append(replace(t, mtd_witness=res[1]))
        else:
            if t.mtw_witness is not None and t.mtw_witness.width <= budget:
                out.append(t)
                continue
            d = None
            if g.vertex_count >= 2 and all(g.adjacency):
                for w in range(1, budget + 1):
                    d = mtw_at_most(g, w)
                    if d is not None:
                        break
            if d is None:
                offenders.append(t.form)
                if not collect_all:
                    break
                continue
            assert verify_matched_td(g, d, budget)
            out.append(replace(t, mtw_witness=d))
    if offenders:
        raise WitnessNotFound(offenders, mode, budget)
    return out


# cache -----------------------------------------------------------------------

class CacheFormatError(ValueError):
    pass


def default_cache_dir() -> Path:
    env = os.environ.get("SPARSEHOM_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "sparsehom"


def _frac(s: str) -> Fraction:
    p, _, q = s.partition("/")
    return Fraction(int(p), int(q or 1))


def dumps_cache(entries: dict[str, list[SpasmTerm]]) -> str:
    lines = [f"spasm-cache version={CACHE_VERSION}"]
    for name in sorted(entries):
        terms = entries[name]
        lines.append(f"pattern {name} terms={len(terms)}")
        for t in terms:
            c = t.coefficient
            lines.append(f"graph {t.form.text()} coeff {c.numerator}/{c.denominator}")
            if t.mtd_witness is not None:
                lines.append("begin-elimtree")
                lines += dump_elimtree(t.mtd_witness).splitlines()
                lines.append("end-elimtree")
            if t.mtw_witness is not None:
                lines.append("begin-treedecomp")
                lines += dump_treedecomp(t.mtw_witness, t.form.vertex_count).splitlines()
                lines.append("end-treedecomp")
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"end sha256={digest}\n"


def loads_cache(text: str) -> dict[str, list[SpasmTerm]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("spasm-cache "):
        raise CacheFormatError("not a spasm cache")
    if lines[0] != f"spasm-cache version={CACHE_VERSION}":
        raise CacheFormatError(f"cache version mismatch: {lines[0]!r}")
    if not lines[-1].startswith("end sha256="):
        raise CacheFormatError("cache is truncated")
    body = "\n".join(lines[:-1]) + "\n"
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1].split("=", 1)[1]:
        raise CacheFormatError("cache checksum mismatch")
    entries: dict[str, list[SpasmTerm]] = {}
    expected: dict[str, int] = {}
    i = 1
    current = None
    while i < len(lines) - 1:
        line = lines[i]
        if line.startswith("pattern "):
            parts = line.split()
            current = parts[1]
            expected[current] = int(parts[2].split("=")[1])
            entries[current] = []
        elif line.startswith("graph "):
            _, form_text, _, coeff = line.split()
            entries[current].append(SpasmTerm(CanonicalForm.from_text(form_text), _frac(coeff)))
        elif line in ("begin-elimtree", "begin-treedecomp"):
            stop = "end-" + line[len("begin-"):]
            j = lines.index(stop, i)
            block = "\n".join(lines[i + 1:j]) + "\n"
            last = entries[current][-1]
            g = last.quotient
            if line == "begin-elimtree":
                t = parse_elimtree(block)
                roles = matched_roles(g, t)
                if roles is None:
                    raise CacheFormatError("cached elimination tree is not matched")
                last = replace(last, mtd_witness=t.with_roles(roles))
            else:
                _, d = parse_treedecomp(block)
                if not verify_matched_td(g, d):
                    raise CacheFormatError("cached tree decomposition is not matched")
                last = replace(last, mtw_witness=d)
            entries[current][-1] = last
            i = j
        else:
            raise CacheFormatError(f"unexpected cache line {line!r}")
        i += 1
    if any(len(entries[k]) != expected[k] for k in entries):
        raise CacheFormatError("term count mismatch")
    return entries


def save_cache(path, entries: dict[str, list[SpasmTerm]]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps_cache(entries))
    tmp.replace(path)


def load_cache(path) -> dict[str, list[SpasmTerm]]:
    return loads_cache(Path(path).read_text())


def cached_spasm(key: str, g: Graph, mode: str | None = None, budget: int | None = None,
                 cache_dir=None) -> list[SpasmTerm]:
    """Spasm terms for ``g`` (optionally with witnesses), memoised on disk under ``key``."""
    cache_dir = default_cache_dir() if cache_dir is None else Path(cache_dir)
    suffix = f"-{mode}{budget}" if mode else ""
    path = cache_dir / f"{key.replace(':', '_').replace(',', '_')}{suffix}.spasm"
    if path.exists():
        try:
            return load_cache(path)[key]
        except (CacheFormatError, KeyError, DecompositionError):
            pass
    terms = spasm_with_coefficients(g)
    if mode:
        terms = attach_decompositions(terms, mode, budget)
    save_cache(path, {key: terms})
    return terms
