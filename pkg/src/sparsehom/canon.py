"""Canonical labelling and automorphism groups for small graphs.

Colour refinement plus individualisation, with automorphism pruning.  All
graphs handled here are patterns or spasm quotients, so the size guard is
small on purpose.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .graph import Graph

MAX_VERTICES = 12


class CanonicalForm(NamedTuple):
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.vertex_count, self.edges)

    def text(self) -> str:
        return f"{self.vertex_count}:" + ",".join(f"{u}-{v}" for u, v in self.edges)

    @classmethod
    def from_text(cls, s: str) -> "CanonicalForm":
        head, _, body = s.partition(":")
        edges = []
        if body:
            for tok in body.split(","):
                a, b = tok.split("-")
                edges.append((int(a), int(b)))
        return cls(int(head), tuple(edges))


class SizeGuardError(ValueError):
    pass


def _guard(g: Graph, limit: int = MAX_VERTICES):
    if g.vertex_count > limit:
        raise SizeGuardError(f"graph has {g.vertex_count} vertices; limit is {limit}")


def refine(adj: Sequence[Sequence[int]], colours: list[int]) -> list[int]:
    """Refine a vertex colouring to the coarsest equitable one.

    New colour ids are ranks of (old colour, multiset of neighbour colours), so
    the result is isomorphism invariant and comparable across graphs refined in
    one call (e.g. on a disjoint union).
    """
    n = len(adj)
    ncol = len(set(colours))
    while True:
        sigs = [(colours[v], tuple(sorted(colours[u] for u in adj[v]))) for v in range(n)]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == ncol:
            return new
        colours, ncol = new, len(rank)


def _target_cell(colours: list[int]) -> list[int] | None:
    """Vertices of the first smallest non-singleton colour class."""
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        cells.setdefault(c, []).append(v)
    best = None
    for c in sorted(cells):
        cell = cells[c]
        if len(cell) > 1 and (best is None or len(cell) < len(best)):
            best = cell
    return best


def _individualise(colours: list[int], v: int) -> list[int]:
    # v gets a colour just below its class; doubling keeps the others distinct.
    out = [2 * c + 1 for c in colours]
    out[v] = 2 * colours[v]
    return out


def _certificate(g: Graph, colours: list[int]) -> int:
    """Upper-triangle adjacency bits of g relabelled by a discrete colouring."""
    n = g.vertex_count
    cert = 0
    for u, v in g.edges():
        a, b = colours[u], colours[v]
        if a > b:
            a, b = b, a
        cert |= 1 << (a * n + b)
    return cert


def _orbit_roots(n: int, gens: list[list[int]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for v in range(n):
            a, b = find(v), find(p[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def canonical_labelling(g: Graph) -> list[int]:
    """Permutation ``lab`` with ``lab[v]`` = canonical position of vertex v."""
    _guard(g)
    n = g.vertex_count
    if n == 0:
        return []
    adj = g.adjacency
    best_cert = None
    best_lab = None
    autos: list[list[int]] = []

    def search(colours: list[int], prefix: list[int]):
        nonlocal best_cert, best_lab
        colours = refine(adj, colours)
        cell = _target_cell(colours)
        if cell is None:
            cert = _certificate(g, colours)
            if best_cert is None or cert < best_cert:
                best_cert, best_lab = cert, colours
            elif cert == best_cert:
                # colours^-1 then best_lab maps this leaf onto the best one
                inv = [0] * n
                for v, c in enumerate(colours):
                    inv[c] = v
                perm = [0] * n
                for c in range(n):
                    perm[inv[c]] = best_lab.index(c)
                autos.append(perm)
            return
        tried: list[int] = []
        for v in cell:
            if tried:
                fixing = [p for p in autos if all(p[x] == x for x in prefix)]
                if fixing:
                    roots = _orbit_roots(n, fixing)
                    if any(roots[v] == roots[w] for w in tried):
                        continue
            tried.append(v)
            search(_individualise(colours, v), prefix + [v])

    search([0] * n, [])
    return best_lab


def canonical_form(g: Graph) -> CanonicalForm:
    lab = canonical_labelling(g)
    edges = sorted(tuple(sorted((lab[u], lab[v]))) for u, v in g.edges())
    return CanonicalForm(g.vertex_count, tuple(edges))


def canonical_graph(g: Graph) -> Graph:
    return canonical_form(g).to_graph()


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False
    return canonical_form(g1) == canonical_form(g2)


# automorphisms -------------------------------------------------------------

def _union_adj(g: Graph):
    n = g.vertex_count
    return [list(a) for a in g.adjacency] + [[u + n for u in a] for a in g.adjacency]


def _extensions(g: Graph, ca: list[int], cb: list[int], find_all: bool):
    """Automorphisms mapping colouring ``ca`` onto ``cb`` (colour-preserving).

    Refines both colourings jointly on the disjoint union so colour ids agree.
    """
    n = g.vertex_count
    uadj = _union_adj(g)

    def rec(colours):
        colours = refine(uadj, colours)
        left, right = colours[:n], colours[n:]
        if sorted(left) != sorted(right):
            return
        cell_a = _target_cell(left)
        if cell_a is None:
            where = {c: v for v, c in enumerate(right)}
            perm = [where[left[v]] for v in range(n)]
            if all(g.has_edge(perm[u], perm[v]) for u, v in g.edges()):
                yield perm
            return
        a = cell_a[0]
        c = left[a]
        for b in [v for v in range(n) if right[v] == c]:
            out = [2 * x + 1 for x in colours]
            out[a] = 2 * c
            out[n + b] = 2 * c
            found = False
            for perm in rec(out):
                found = True
                yield perm
            if found and not find_all:
                return

    yield from rec(list(ca) + list(cb))


def automorphisms(g: Graph) -> list[list[int]]:
    """The whole automorphism group as a list of permutations ``p[v]``."""
    _guard(g)
    if g.vertex_count == 0:
        return [[]]
    base = [0] * g.vertex_count
    return sorted(_extensions(g, base, base, True))


def automorphism_count(g: Graph) -> int:
    """|Aut(g)| via orbit-stabiliser; never enumerates the group."""
    _guard(g)
    n = g.vertex_count
    total = 1
    colours = refine(g.adjacency, [0] * n)
    while True:
        cell = _target_cell(colours)
        if cell is None:
            return total
        a = cell[0]
        target = _individualise(colours, a)
        orbit = 1
        for b in cell[1:]:
            if next(_extensions(g, target, _individualise(colours, b), False), None) is not None:
                orbit += 1
        total *= orbit
        colours = refine(g.adjacency, target)
