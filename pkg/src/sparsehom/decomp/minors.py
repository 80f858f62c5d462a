"""Induced-minor testing for small graphs, plus a treewidth upper bound."""

from __future__ import annotations

from ..canon import canonical_form
from ..graph import Graph

MINOR_LIMIT = 12


def contract(g: Graph, u: int, v: int) -> Graph:
    """Merge v into u, dropping the loop and any parallel edge, and relabel densely."""
    keep = [x for x in range(g.vertex_count) if x != v]
    index = {x: i for i, x in enumerate(keep)}
    index[v] = index[u]
    edges = {(min(index[a], index[b]), max(index[a], index[b])) for a, b in g.edges()}
    edges.discard((index[u], index[u]))
    return Graph.from_edges(len(keep), edges)


def delete_vertex(g: Graph, v: int) -> Graph:
    return g.induced([x for x in range(g.vertex_count) if x != v])


def is_induced_minor(pattern: Graph, g: Graph, limit: int = MINOR_LIMIT) -> bool:
    """True iff ``pattern`` arises from ``g`` by deleting vertices and contracting edges."""
    if g.vertex_count > limit:
        raise ValueError(f"induced-minor test limited to {limit} host vertices")
    target = canonical_form(pattern)
    k, e = pattern.vertex_count, pattern.edge_count
    seen: set = set()

    def rec(h: Graph) -> bool:
        if h.vertex_count < k or h.edge_count < e:
            return False
        form = canonical_form(h)
        if form in seen:
            return False
        seen.add(form)
        if h.vertex_count == k:
            return form == target
        for v in range(h.vertex_count):
            if rec(delete_vertex(h, v)):
                return True
        for a, b in h.edges():
            if rec(contract(h, a, b)):
                return True
        return False

    return rec(g)


def treewidth_upper_bound(g: Graph):
    """Greedy min-degree elimination; returns (width, decomposition)."""
    from .treedecomp import decomposition_from_ordering

    nb = [set(a) for a in g.adjacency]
    alive = set(range(g.vertex_count))
    order = []
    while alive:
        v = min(alive, key=lambda x: (len(nb[x] & alive), x))
        later = nb[v] & alive
        for a in later:
            nb[a] |= later - {a}
        order.append(v)
        alive.discard(v)
    d = decomposition_from_ordering(g, order)
    return d.width, d
