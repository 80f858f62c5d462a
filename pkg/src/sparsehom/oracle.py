"""Brute-force reference counts.  Deliberately naive; used to check everything else."""

from __future__ import annotations

import itertools

from .canon import automorphism_count, canonical_form
from .constraints import all_hold
from .graph import Graph

PATTERN_LIMIT = 8
HOST_LIMIT = 14


class OracleSizeError(ValueError):
    pass


def _check(g: Graph, h: Graph, pattern_limit: int, host_limit: int):
    if g.vertex_count > pattern_limit:
        raise OracleSizeError(f"pattern has {g.vertex_count} vertices; oracle limit {pattern_limit}")
    if h.vertex_count > host_limit:
        raise OracleSizeError(f"host has {h.vertex_count} vertices; oracle limit {host_limit}")


def _maps(g: Graph, h: Graph, injective: bool):
    """Yield every homomorphism g -> h as a list (shared buffer; copy if kept)."""
    n = g.vertex_count
    sigma = [-1] * n
    used = [False] * h.vertex_count
    earlier = [[u for u in g.adjacency[v] if u < v] for v in range(n)]

    def rec(v):
        if v == n:
            yield sigma
            return
        for x in range(h.vertex_count):
            if injective and used[x]:
                continue
            if all(h.has_edge(sigma[u], x) for u in earlier[v]):
                sigma[v] = x
                used[x] = True
                yield from rec(v + 1)
                used[x] = False
        sigma[v] = -1

    yield from rec(0)


def oracle_hom(g: Graph, h: Graph, constraints=(), *, pattern_limit=PATTERN_LIMIT,
               host_limit=HOST_LIMIT) -> int:
    _check(g, h, pattern_limit, host_limit)
    if not constraints:
        return sum(1 for _ in _maps(g, h, False))
    return sum(1 for s in _maps(g, h, False) if all_hold(constraints, s))


def oracle_injective_hom(g: Graph, h: Graph, *, pattern_limit=PATTERN_LIMIT,
                         host_limit=HOST_LIMIT) -> int:
    _check(g, h, pattern_limit, host_limit)
    return sum(1 for _ in _maps(g, h, True))


def oracle_sub(g: Graph, h: Graph, **limits) -> int:
    """Number of subgraphs of h isomorphic to g."""
    inj = oracle_injective_hom(g, h, **limits)
    aut = automorphism_count(g)
    assert inj % aut == 0
    return inj // aut


def oracle_induced_exists(g: Graph, h: Graph, *, pattern_limit=PATTERN_LIMIT,
                          host_limit=HOST_LIMIT) -> bool:
    _check(g, h, pattern_limit, host_limit)
    k = g.vertex_count
    target = canonical_form(g)
    degs = sorted(g.degree(v) for v in range(k))
    for subset in itertools.combinations(range(h.vertex_count), k):
        sub = h.induced(subset)
        if sub.edge_count != g.edge_count:
            continue
        if sorted(sub.degree(v) for v in range(k)) != degs:
            continue
        if canonical_form(sub) == target:
            return True
    return False


def oracle_induced_count(g: Graph, h: Graph, **limits) -> int:
    """Number of vertex subsets of h inducing a copy of g."""
    _check(g, h, limits.get("pattern_limit", PATTERN_LIMIT), limits.get("host_limit", HOST_LIMIT))
    target = canonical_form(g)
    return sum(1 for s in itertools.combinations(range(h.vertex_count), g.vertex_count)
               if canonical_form(h.induced(s)) == target)
