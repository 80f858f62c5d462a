import random

import pytest

from sparsehom.graph import Graph, clique, cycle, make_pattern, path, star
from sparsehom.oracle import oracle_hom, oracle_sub
from sparsehom.patterns import (
    CONST_SPACE,
    POLY_SPACE,
    NonIntegralCount,
    count_homs,
    count_subgraphs,
    plan,
)

from conftest import random_host


@pytest.mark.parametrize("mode", [CONST_SPACE, POLY_SPACE])
def test_counting_examples(mode):
    assert count_subgraphs(plan(cycle(4), mode), clique(4)) == 3
    assert count_subgraphs(plan(cycle(6), mode), clique(6)) == 60
    assert count_subgraphs(plan(path(3), mode), star(5)) == 10
    assert count_homs(star(3), path(4), mode) == 18
    h = make_pattern("petersen")
    assert count_homs(path(2), h, mode) == 2 * h.edge_count
    assert count_homs(cycle(5), h, mode) == 120


def test_disconnected_patterns():
    g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])
    h = make_pattern("petersen")
    assert count_homs(g, h) == count_homs(path(2), h) * count_homs(path(3), h)
    assert count_homs(Graph.from_edges(3, [(0, 1)]), h) == 2 * h.edge_count * h.vertex_count
    with pytest.raises(ValueError):
        plan(g)


def test_plan_exponents():
    c11 = plan(cycle(11), CONST_SPACE)
    assert all(e.witness.depth() <= 6 for e in c11.entries)
    assert c11.predicted_exponent == 3 and not c11.fallbacks
    p10 = plan(path(10), POLY_SPACE)
    assert all(e.witness.width <= 3 for e in p10.entries)
    assert p10.predicted_exponent == 2 and not p10.fallbacks
    assert plan(cycle(9), POLY_SPACE).predicted_exponent == 2


def test_fallback_is_reported():
    # C10's spasm holds K5, which has no matched decomposition of width 3
    p = plan(cycle(10), POLY_SPACE)
    assert p.fallbacks
    assert p.predicted_exponent > 2
    h = random_host(random.Random(1), 10, 10, 0.5, 0.5)
    assert count_subgraphs(p, h) == count_subgraphs(plan(cycle(10), CONST_SPACE), h)


def test_modes_agree_and_match_oracle():
    rng = random.Random(30)
    patterns = [path(5), cycle(5), make_pattern("k4-e"), make_pattern("t33")]
    for _ in range(8):
        h = random_host(rng, 2, 10)
        for g in patterns:
            want = oracle_sub(g, h)
            assert count_subgraphs(plan(g, CONST_SPACE), h) == want
            assert count_subgraphs(plan(g, POLY_SPACE), h) == want
            assert count_homs(g, h, CONST_SPACE) == count_homs(g, h, POLY_SPACE) == oracle_hom(g, h)


def test_planted_instances():
    rng = random.Random(31)
    for g in (cycle(7), path(7), clique(4)):
        for _ in range(4):
            n = 11
            spots = rng.sample(range(n), g.vertex_count)
            edges = {tuple(sorted((spots[u], spots[v]))) for u, v in g.edges()}
            while len(edges) < g.edge_count + 8:
                u, v = rng.sample(range(n), 2)
                edges.add((min(u, v), max(u, v)))
            h = Graph.from_edges(n, edges)
            assert count_subgraphs(plan(g), h) == oracle_sub(g, h) >= 1


def test_cache_reuse(tmp_path):
    first = plan(cycle(7), POLY_SPACE, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    again = plan(cycle(7), POLY_SPACE, cache_dir=tmp_path)
    assert [e.term.form for e in again.entries] == [e.term.form for e in first.entries]
    assert [e.witness.bags for e in again.entries] == [e.witness.bags for e in first.entries]
    files[0].write_text("spasm-cache version=1\nbroken")
    assert len(plan(cycle(7), POLY_SPACE, cache_dir=tmp_path).entries) == len(first.entries)


def test_threads_give_same_total():
    h = random_host(random.Random(3), 10, 10, 0.5, 0.5)
    p = plan(cycle(6))
    assert count_subgraphs(p, h, threads=2) == count_subgraphs(p, h) == oracle_sub(cycle(6), h)


def test_non_integral_total_is_an_error():
    from dataclasses import replace
    from fractions import Fraction

    p = plan(cycle(4))
    broken = replace(p, entries=tuple(replace(e, term=replace(e.term, coefficient=Fraction(1, 7)))
                                      for e in p.entries))
    with pytest.raises(NonIntegralCount):
        count_subgraphs(broken, cycle(5))


def test_bad_inputs():
    with pytest.raises(ValueError):
        plan(cycle(4), "quadratic")
    with pytest.raises(ValueError):
        plan(cycle(12))
    assert count_subgraphs(plan(Graph.from_edges(1, [])), cycle(5)) == 5
