"""Simple undirected graphs used both as patterns and as hosts.

Vertices are always the dense range ``0..n-1``.  Adjacency lists are sorted,
so iterating ``adj[x]`` for ``x = 0, 1, ...`` walks the arcs of the graph
grouped by source, which is the access pattern the counting algorithms need.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised for malformed edge lists or pattern names."""


@dataclass(frozen=True, eq=False)
class Graph:
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adjacency) != self.vertex_count:
            raise ValueError("adjacency length does not match vertex count")
        for u, nbrs in enumerate(self.adjacency):
            for a, b in zip(nbrs, nbrs[1:]):
                if a >= b:
                    raise ValueError(f"neighbors of {u} not strictly increasing")
            for v in nbrs:
                if v == u:
                    raise ValueError(f"self-loop at {u}")
                if not 0 <= v < self.vertex_count:
                    raise ValueError(f"neighbor {v} of {u} out of range")
        sets = tuple(frozenset(nbrs) for nbrs in self.adjacency)
        for u, s in enumerate(sets):
            for v in s:
                if u not in sets[v]:
                    raise ValueError(f"asymmetric adjacency {u}->{v}")
        masks = tuple(sum(1 << v for v in nbrs) for nbrs in self.adjacency)
        object.__setattr__(self, "_sets", sets)
        object.__setattr__(self, "_masks", masks)

    # construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), labels)

    # basic queries ------------------------------------------------------

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def m(self) -> int:
        return self.edge_count

    @property
    def masks(self) -> tuple[int, ...]:
        """Neighborhood of each vertex as an int bitmask."""
        return self._masks

    @property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return self._sets

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in self.adjacency[u] if u < v]

    def arcs(self):
        """Yield ``(x, y)`` for every ordered edge, grouped by ``x``."""
        for x, nbrs in enumerate(self.adjacency):
            for y in nbrs:
                yield x, y

    def label(self, v: int):
        return v if self.labels is None else self.labels[v]

    # derived graphs -----------------------------------------------------

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..k-1`` in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u in vertices for v in self.adjacency[u]
                 if v in index and index[u] < index[v]]
        return Graph.from_edges(len(vertices), edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.vertex_count, [(perm[u], perm[v]) for u, v in self.edges()])

    def complement(self) -> "Graph":
        n = self.vertex_count
        return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2)
                                    if not self.has_edge(u, v)])

    def disjoint_union(self, other: "Graph") -> "Graph":
        k = self.vertex_count
        edges = self.edges() + [(u + k, v + k) for u, v in other.edges()]
        return Graph.from_edges(k + other.vertex_count, edges)

    def add_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph.from_edges(self.vertex_count, self.edges() + list(extra))

    def components(self, within: int | None = None) -> list[int]:
        """Connected components of the subgraph induced by bitmask ``within``."""
        return mask_components(self._masks, (1 << self.vertex_count) - 1 if within is None else within)

    def is_connected(self) -> bool:
        return self.vertex_count > 0 and len(self.components()) == 1

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.adjacency == other.adjacency

    def __hash__(self):
        return hash((self.vertex_count, self.adjacency))

    def __repr__(self):
        return f"Graph(n={self.vertex_count}, edges={self.edges()})"


def mask_components(masks: Sequence[int], within: int) -> list[int]:
    """Split the vertex bitmask ``within`` into connected components."""
    comps = []
    rest = within
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = masks[v] & within & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# edge-list text format -------------------------------------------------

def load_edge_list(text) -> Graph:
    """Parse an edge list (``str``, ``bytes`` or a text/binary stream).

    Original vertex ids are densified to ``0..n-1`` in increasing numeric order;
    the originals are kept in ``Graph.labels``.
    """
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    pairs = []
    seen = set()
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"line {lineno}: expected two vertex ids, got {line!r}")
        try:
            u, v = (int(t, 10) for t in tokens)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: malformed vertex id in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop on {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(key)
        pairs.append((u, v))
    ids = sorted({x for p in pairs for x in p})
    index = {x: i for i, x in enumerate(ids)}
    return Graph.from_edges(len(ids), [(index[u], index[v]) for u, v in pairs], labels=tuple(ids))


def dump_edge_list(g: Graph, original_labels: bool = True) -> str:
    lab = g.label if original_labels else (lambda v: v)
    return "".join(f"{lab(u)} {lab(v)}\n" for u, v in g.edges())


# named patterns ----------------------------------------------------------

def path(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> Graph:
    if k < 3:
        raise GraphFormatError("cycles need at least 3 vertices")
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def clique(k: int) -> Graph:
    return Graph.from_edges(k, itertools.combinations(range(k), 2))


def star(k: int) -> Graph:
    """The k-star: a center (vertex 0) joined to k leaves."""
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def complement_path(k: int) -> Graph:
    return path(k).complement()


def tadpole(c: int, p: int) -> Graph:
    """Cycle on ``c`` vertices with a pendant path of ``p`` vertices at vertex 0."""
    edges = [(i, (i + 1) % c) for i in range(c)]
    prev = 0
    for j in range(p):
        edges.append((prev, c + j))
        prev = c + j
    return Graph.from_edges(c + p, edges)


def three_hubs(internal: int) -> Graph:
    """Three independent hubs, each pair joined by two paths with ``internal`` inner vertices.

    ``internal=1`` gives the 9-vertex graph X; ``internal=2`` gives Y.
    Hubs are vertices 0, 1, 2.
    """
    edges = []
    nxt = 3
    for a, b in ((0, 1), (1, 2), (2, 0)):
        for _ in range(2):
            prev = a
            for _ in range(internal):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
            edges.append((prev, b))
    return Graph.from_edges(nxt, edges)


def graph_x() -> Graph:
    # u0, u2, u4 are the hubs; u1, u1', u3, u3', u5, u5' the connectors.
    return three_hubs(1)


def graph_y() -> Graph:
    return three_hubs(2)


def graph_z() -> Graph:
    """Y plus one common neighbour for each pair of hubs (Y stays induced)."""
    y = graph_y()
    n = y.vertex_count
    extra = [(0, n), (1, n), (1, n + 1), (2, n + 1), (2, n + 2), (0, n + 2)]
    return Graph.from_edges(n + 3, y.edges() + extra)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


_NAMED = {
    "x": graph_x,
    "y": graph_y,
    "z": graph_z,
    "t33": lambda: tadpole(3, 3),
    "k4-e": lambda: Graph.from_edges(4, [e for e in itertools.combinations(range(4), 2) if e != (2, 3)]),
    "petersen": petersen,
}


def make_pattern(name: str) -> Graph:
    """Build a graph from a name such as ``cycle:5``, ``pbar:6``, ``kmn:3,3`` or ``X``."""
    key = name.strip().lower()
    family, _, arg = key.partition(":")
    if family in ("named", "") and arg:
        family, arg = arg, ""
    if not arg:
        if family in _NAMED:
            return _NAMED[family]()
        if family.startswith("k") and "," in family:
            family, arg = "kmn", family[1:]
    try:
        params = [int(p) for p in arg.split(",")] if arg else []
    except ValueError:
        raise GraphFormatError(f"bad size parameter in pattern name {name!r}") from None
    builders = {
        "path": path, "p": path,
        "cycle": cycle, "c": cycle,
        "clique": clique, "k": clique,
        "star": star,
        "complement-path": complement_path, "pbar": complement_path,
        "kmn": complete_bipartite,
        "tadpole": tadpole,
    }
    if family not in builders:
        raise GraphFormatError(f"unknown pattern family {family!r}")
    arity = 2 if family in ("kmn", "tadpole") else 1
    if len(params) != arity:
        raise GraphFormatError(f"pattern {name!r} needs {arity} size parameter(s)")
    if any(p < 1 for p in params):
        raise GraphFormatError(f"pattern {name!r}: sizes must be positive")
    return builders[family](*params)
