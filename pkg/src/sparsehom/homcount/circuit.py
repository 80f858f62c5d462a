"""Homomorphism-polynomial circuits over a matched tree decomposition.

For every bag B (rooted at bag 0) and every image tuple K of the vertices B
shares with its parent there is one sum gate MapGate(B, K).  Its terms range
over the valid placements of all of B's vertices that agree with K; each term
multiplies the vertex variables of the pattern vertices assigned to B (their
topmost bag) with MapGate(C, placement restricted to B ∩ C) for every child
bag C.  Placements are enumerated pair by pair along the bag's matching, so a
bag with p pairs walks at most (2m)^p arc tuples, and a leftover vertex takes
its image among the neighbours of its partner's image.

Edge variables are fixed to 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..constraints import all_hold
from ..decomp.elimtree import DecompositionError
from ..decomp.treedecomp import TreeDecomposition, certificate_is_valid, matched_certificate, verify_td
from ..graph import Graph

CIRCUIT_FORMAT_VERSION = 1


@dataclass
class BagBlock:
    """All gates of one bag.  Terms are parallel lists."""

    bag: int
    first_gate: int
    gate_count: int
    term_gate: list[int] = field(default_factory=list)
    term_vertices: list[tuple[int, ...]] = field(default_factory=list)
    term_children: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class HomCircuit:
    host_vertex_count: int
    blocks: list[BagBlock]          # bottom-up: children before parents
    gate_count: int
    output: int | None              # None: the polynomial is zero
    tables: dict[int, dict[tuple, int]]

    @property
    def term_count(self) -> int:
        return sum(len(b.term_gate) for b in self.blocks)

    def dump(self) -> str:
        lines = [f"circuit version={CIRCUIT_FORMAT_VERSION} gates={self.gate_count} "
                 f"output={'none' if self.output is None else self.output}"]
        for blk in self.blocks:
            per_gate: dict[int, list[str]] = {}
            for gid, vs, cs in zip(blk.term_gate, blk.term_vertices, blk.term_children):
                factors = [f"y{v}" for v in vs] + [f"g{c}" for c in cs]
                per_gate.setdefault(gid, []).append("*".join(factors) or "1")
            for gid in sorted(per_gate):
                lines.append(f"gate {gid} = " + " + ".join(per_gate[gid]))
        return "\n".join(lines) + "\n"


def _certificates(g: Graph, d: TreeDecomposition):
    if not verify_td(g, d):
        raise DecompositionError("not a tree decomposition of the pattern")
    out = []
    memo: dict = {}
    for i, bag in enumerate(d.bags):
        m = d.matchings[i] if d.matchings is not None else None
        if m is None or not certificate_is_valid(g, bag, m):
            m = matched_certificate(g, bag, memo)
        if m is None:
            raise DecompositionError(f"bag {sorted(bag)} is not matched")
        out.append(tuple(m))
    return out


def _placement_order(g: Graph, bag: frozenset, matching) -> list[tuple[int, int, int]]:
    """Steps (vertex, source, kind) for enumerating a bag.

    kind 0: the first vertex of a free pair, any host vertex with an arc;
    kind 1: a vertex placed on a neighbour of ``source``'s image.
    Pairs touching already placed vertices go first so they can be anchored.
    """
    pairs = [tuple(p) for p in matching]
    covered = {v for p in pairs for v in p}
    left = [v for v in bag if v not in covered]
    placed: set[int] = set()
    steps = []
    while pairs:
        best = None
        for i, (a, b) in enumerate(pairs):
            na = [u for u in g.adjacency[a] if u in placed]
            nb = [u for u in g.adjacency[b] if u in placed]
            if na or nb:
                best = (i, (a, na[0]) if na else (b, nb[0]))
                break
        if best is None:
            a, b = pairs.pop(0)
            steps += [(a, -1, 0), (b, a, 1)]
        else:
            i, (first, src) = best
            a, b = pairs.pop(i)
            second = b if first == a else a
            steps += [(first, src, 1), (second, first, 1)]
        placed.update((a, b))
    for c in left:
        src = min(u for u in g.adjacency[c] if u in covered)
        steps.append((c, src, 1))
    return steps


def _anchor_bags(d: TreeDecomposition, order: Sequence[int], constraints):
    anchors: dict[int, list] = {}
    for c in constraints:
        for b in order:
            if c.vertices <= d.bags[b]:
                anchors.setdefault(b, []).append(c)
                break
        else:
            raise DecompositionError(f"constraint {c} spans vertices that share no bag")
    return anchors


def build_hom_circuit(g: Graph, d: TreeDecomposition, h: Graph, constraints=(),
                      root: int = 0) -> HomCircuit:
    """Circuit whose monomials are the homomorphisms g -> h satisfying ``constraints``."""
    return _walk(g, d, h, constraints, root, fused=False)


def _walk(g: Graph, d: TreeDecomposition, h: Graph, constraints, root: int, fused: bool):
    """Shared bag-by-bag enumeration.

    With ``fused`` the tables hold the all-ones value of each gate instead of
    a gate id, no terms are stored, and the result is the integer count.
    """
    if g.vertex_count == 0:
        raise DecompositionError("empty pattern")
    certs = _certificates(g, d)
    parent, children, order = d.rooted(root)
    anchors = _anchor_bags(d, order, constraints)

    # topmost bag containing each vertex
    home = {}
    for b in order:
        for v in d.bags[b]:
            home.setdefault(v, b)

    hadj = h.adjacency
    hset = h.neighbor_sets
    sources = [x for x in range(h.vertex_count) if hadj[x]]
    sigma = [-1] * g.vertex_count
    tables: dict[int, dict[tuple, int]] = {}
    blocks: list[BagBlock] = []
    next_gate = 0

    for b in reversed(order):
        bag = d.bags[b]
        steps = _placement_order(g, bag, certs[b])
        inside = [[u for u in g.adjacency[v] if u in bag] for v in range(g.vertex_count)]
        rank = {v: i for i, (v, _, _) in enumerate(steps)}
        # edges to check when placing a vertex: bag neighbours placed earlier
        earlier = {v: tuple(u for u in inside[v] if rank[u] < rank[v]) for v in bag}
        checks = {}
        for c in anchors.get(b, ()):
            last = max(c.vertices, key=rank.__getitem__)
            checks.setdefault(last, []).append(c)
        key_vs = tuple(sorted(bag & d.bags[parent[b]])) if parent[b] >= 0 else ()
        own = tuple(sorted(v for v in bag if home[v] == b))
        kid_keys = [(tables[c], tuple(sorted(bag & d.bags[c]))) for c in children[b]]
        table: dict[tuple, int] = {}
        blk = BagBlock(b, next_gate, 0)
        k = len(steps)

        def emit_value():
            p = 1
            for tab, vs in kid_keys:
                val = tab.get(tuple(sigma[v] for v in vs))
                if val is None:
                    return
                p *= val
            key = tuple(sigma[v] for v in key_vs)
            table[key] = table.get(key, 0) + p

        def emit():
            nonlocal next_gate
            kids = []
            for tab, vs in kid_keys:
                gid = tab.get(tuple(sigma[v] for v in vs))
                if gid is None:
                    return
                kids.append(gid)
            key = tuple(sigma[v] for v in key_vs)
            gid = table.get(key)
            if gid is None:
                gid = table[key] = next_gate
                next_gate += 1
            blk.term_gate.append(gid)
            blk.term_vertices.append(tuple(sigma[v] for v in own))
            blk.term_children.append(tuple(kids))

        def place(i: int):
            if i == k:
                sink()
                return
            v, src, kind = steps[i]
            cands = sources if kind == 0 else hadj[sigma[src]]
            need = earlier[v]
            cons = checks.get(v)
            for x in cands:
                s = hset[x]
                ok = True
                for u in need:
                    if sigma[u] not in s:
                        ok = False
                        break
                if not ok:
                    continue
                sigma[v] = x
                if cons is None or all_hold(cons, sigma):
                    place(i + 1)
            sigma[v] = -1

        sink = emit_value if fused else emit
        place(0)
        tables[b] = table
        if fused:
            for c in children[b]:
                del tables[c]
        else:
            blk.gate_count = next_gate - blk.first_gate
            blocks.append(blk)

    out = tables[root].get(())
    if fused:
        return out or 0
    return HomCircuit(h.vertex_count, blocks, next_gate, out, tables)


# evaluation ------------------------------------------------------------------

class IntegerRing:
    """Arbitrary-precision integers."""

    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b


def evaluate_circuit(c: HomCircuit, ring=IntegerRing, valuation: Callable[[int], object] | None = None):
    """Value of the circuit's polynomial, edge variables set to 1.

    ``valuation(x)`` gives the ring element for host vertex x; None means
    every vertex variable is ``ring.one``.
    """
    if c.output is None:
        return ring.zero
    values = [ring.zero] * c.gate_count
    add, mul = ring.add, ring.mul
    cache: dict[int, object] = {}

    def y(x):
        v = cache.get(x)
        if v is None:
            v = cache[x] = valuation(x)
        return v

    for blk in c.blocks:
        for gid, vs, kids in zip(blk.term_gate, blk.term_vertices, blk.term_children):
            if valuation is None:
                p = ring.one
            else:
                p = ring.one
                for x in vs:
                    p = mul(p, y(x))
            for k in kids:
                p = mul(p, values[k])
            values[gid] = add(values[gid], p)
    return values[c.output]


def count_all_ones(c: HomCircuit) -> int:
    """Integer evaluation with all variables 1 (fast path)."""
    if c.output is None:
        return 0
    values = [0] * c.gate_count
    for blk in c.blocks:
        for gid, kids in zip(blk.term_gate, blk.term_children):
            p = 1
            for k in kids:
                p *= values[k]
            values[gid] += p
    return values[c.output]


def count_hom_mtw(g: Graph, d: TreeDecomposition, h: Graph, constraints=()) -> int:
    """Number of homomorphisms g -> h (satisfying ``constraints``).

    Same enumeration as ``build_hom_circuit`` followed by all-ones integer
    evaluation, fused so that only per-gate totals are kept.
    """
    if h.vertex_count == 0:
        return 0
    if g.vertex_count == 1 and not constraints:
        return h.vertex_count
    return _walk(g, d, h, constraints, 0, fused=True)
