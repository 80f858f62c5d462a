import itertools
import random

import pytest

from sparsehom.decomp import (
    DecompositionError,
    dump_elimtree,
    dump_treedecomp,
    exact_mtd,
    exact_mtw,
    exact_td,
    exact_tw,
    forbidden_mtd3_free,
    is_induced_minor,
    lift_td_to_mtd,
    lift_tw_to_mtw,
    make_td,
    parse_elimtree,
    parse_treedecomp,
    smallest_maximal_matching_size,
    verify_elim_tree,
    verify_matched_elim_tree,
    verify_matched_td,
    verify_td,
)
from sparsehom.decomp.elimtree import tree_from_children
from sparsehom.decomp.textio import DecompositionFormatError
from sparsehom.decomp.treedecomp import decomposition_from_ordering
from sparsehom.graph import (
    Graph,
    bits,
    clique,
    complete_bipartite,
    cycle,
    graph_x,
    make_pattern,
    path,
    star,
    tadpole,
)

from conftest import all_graphs

K4_MINUS_E = make_pattern("k4-e")


def _chain(*order, n=None):
    n = n or len(order)
    return tree_from_children(n, order[0], {a: [b] for a, b in zip(order, order[1:])})


def _connected_up_to(n_max):
    return [g for n in range(2, n_max + 1) for g in all_graphs(n) if g.is_connected()]


def _sample_connected(n, count, seed):
    rng = random.Random(seed)
    out = []
    pairs = list(itertools.combinations(range(n), 2))
    while len(out) < count:
        p = rng.uniform(0.2, 0.6)
        g = Graph.from_edges(n, [e for e in pairs if rng.random() < p])
        if g.is_connected():
            out.append(g)
    return out


# elimination trees ---------------------------------------------------------------

def test_elim_tree_examples():
    p3 = path(3)
    assert verify_elim_tree(p3, tree_from_children(3, 1, {1: [0, 2]}))
    assert verify_elim_tree(p3, _chain(0, 1, 2))
    assert not verify_elim_tree(clique(3), tree_from_children(3, 0, {0: [1, 2]}))


def test_matched_elim_tree_examples():
    # P4 = 0-1-2-3; chain 2 -> 1 -> 0 with 3 under 2
    t = tree_from_children(4, 2, {2: [1, 3], 1: [0]})
    assert verify_matched_elim_tree(path(4), t)
    assert exact_mtd(cycle(4), 3) is None
    for order in itertools.permutations(range(4)):
        t = tree_from_children(4, order[0], {order[0]: [order[1]], order[1]: [order[2], order[3]]})
        assert not verify_matched_elim_tree(cycle(4), t)
    assert verify_matched_elim_tree(star(4), tree_from_children(5, 0, {0: [1, 2, 3, 4]}))


@pytest.mark.parametrize("g, value", [
    (cycle(4), 4), (K4_MINUS_E, 3), (star(5), 2), (path(2), 2), (clique(4), 4),
])
def test_exact_mtd_values(g, value):
    d, t = exact_mtd(g)
    assert d == value
    assert verify_matched_elim_tree(g, t) and t.depth() == d


def test_mtd_of_p8_has_depth_four_witness():
    # the tree below is matched: every root-to-leaf path is 4-3-2-1, 4-5-7-6 or 4-5-7-8
    g = path(8)
    t = tree_from_children(8, 3, {3: [2, 4], 2: [1], 1: [0], 4: [6], 6: [5, 7]})
    assert verify_matched_elim_tree(g, t) and t.depth() == 4
    assert exact_mtd(g)[0] == 4
    assert exact_mtd(g, 3) is None


@pytest.mark.parametrize("g, value", [(star(4), 2), (path(8), 4), (clique(4), 4), (cycle(6), 4)])
def test_exact_td_values(g, value):
    d, t = exact_td(g)
    assert d == value and verify_elim_tree(g, t) and t.depth() == d


def test_lift_td_to_mtd_examples():
    t = tree_from_children(5, 0, {0: [1, 2, 3, 4]})
    assert lift_td_to_mtd(star(4), t).depth() == 2
    g = cycle(4)
    _, t = exact_td(g)
    lifted = lift_td_to_mtd(g, t)
    assert verify_matched_elim_tree(g, lifted) and lifted.depth() <= 4
    g = path(8)
    _, t = exact_td(g)
    lifted = lift_td_to_mtd(g, t)
    assert verify_matched_elim_tree(g, lifted) and lifted.depth() <= 6


def test_disconnected_input_rejected():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DecompositionError):
        exact_mtd(g)
    with pytest.raises(DecompositionError):
        exact_td(g)


# tree decompositions ------------------------------------------------------------

def test_matched_td_examples():
    tree = make_pattern("star:3")
    d = make_td([{0, 1}, {0, 2}, {0, 3}], [(0, 1), (0, 2)])
    assert verify_matched_td(tree, d) and d.width == 1
    for n in (2, 3):
        g = complete_bipartite(n, n)
        everything = set(range(2 * n))
        d = make_td([everything - {0}, everything - {1}], [(0, 1)])
        assert verify_matched_td(g, d) and d.width == 2 * n - 2
    whole = make_td([set(range(5))], [])
    assert verify_matched_td(cycle(5), whole)
    assert not verify_matched_td(cycle(5), whole, max_width=2)
    # a bag without an edge inside is never matched
    assert not verify_matched_td(path(3), make_td([{0, 1}, {0, 2}], [(0, 1)]))


@pytest.mark.parametrize("g, value", [
    (path(6), 1), (make_pattern("star:4"), 1), (cycle(5), 3), (complete_bipartite(2, 2), 2),
    (complete_bipartite(3, 3), 4), (graph_x(), 4), (cycle(6), 3), (cycle(4), 2),
])
def test_exact_mtw_values(g, value):
    w, d = exact_mtw(g)
    assert w == value
    assert verify_matched_td(g, d) and d.width == w
    assert exact_mtw(g, value - 1) is None


def test_lift_tw_to_mtw_examples():
    tree = path(5)
    d = make_td([{i, i + 1} for i in range(4)], [(i, i + 1) for i in range(3)])
    out = lift_tw_to_mtw(tree, d)
    assert verify_matched_td(tree, out) and out.width == 1
    c5 = cycle(5)
    d = make_td([{0, 1, 2}, {0, 2, 3}, {0, 3, 4}], [(0, 1), (1, 2)])
    assert verify_td(c5, d) and d.width == 2
    out = lift_tw_to_mtw(c5, d)
    assert verify_matched_td(c5, out) and out.width <= 5
    c6 = cycle(6)
    d = make_td([{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}], [(0, 1), (1, 2), (2, 3)])
    out = lift_tw_to_mtw(c6, d)
    assert verify_matched_td(c6, out) and out.width <= 3


def test_tw_values():
    assert exact_tw(cycle(7))[0] == 2
    assert exact_tw(clique(5))[0] == 4
    assert exact_tw(complete_bipartite(3, 3))[0] == 3


# predicates ----------------------------------------------------------------------

def test_induced_minor_examples():
    assert is_induced_minor(cycle(5), cycle(6))
    assert not is_induced_minor(cycle(5), clique(4))
    assert is_induced_minor(cycle(4), cycle(4))
    assert not is_induced_minor(cycle(4), clique(5))


def test_forbidden_mtd3_examples():
    assert forbidden_mtd3_free(K4_MINUS_E)
    assert not forbidden_mtd3_free(cycle(4))
    assert not forbidden_mtd3_free(tadpole(3, 3))
    assert forbidden_mtd3_free(Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)]))


def test_smallest_maximal_matching():
    assert smallest_maximal_matching_size(path(4)) == 2
    assert smallest_maximal_matching_size(cycle(11)) == 8
    assert smallest_maximal_matching_size(star(5)) == 2


# text round trips ----------------------------------------------------------------

def test_text_round_trips():
    g = cycle(7)
    _, t = exact_mtd(g)
    again = parse_elimtree(dump_elimtree(t))
    assert again.parent == t.parent and again.root == t.root
    _, d = exact_mtw(g)
    n, d2 = parse_treedecomp(dump_treedecomp(d, g.vertex_count))
    assert n == 7 and d2.bags == d.bags and d2.edges == d.edges
    assert verify_matched_td(g, d2)


@pytest.mark.parametrize("text", [
    "", "elimtree n=3 root=5\n", "elimtree n=2 root=0\nparent 1: 0\nparent 1: 0\n",
    "treedecomp n=2\nbag 0: 0 1\nlink 0 7\n",
])
def test_text_rejects_garbage(text):
    with pytest.raises(DecompositionFormatError):
        if text.startswith("tree"):
            parse_treedecomp(text)
        else:
            parse_elimtree(text)


# structural properties over small graphs --------------------------------------------

SMALL = _connected_up_to(7)
EIGHT = _sample_connected(8, 400, seed=8)


def test_every_connected_graph_up_to_seven_is_enumerated():
    assert len(SMALL) == 1 + 2 + 6 + 21 + 112 + 853


@pytest.mark.parametrize("graphs", [SMALL, EIGHT], ids=["exhaustive-le7", "sample-8"])
def test_treedepth_relations(graphs):
    for g in graphs:
        m, t = exact_mtd(g)
        d, _ = exact_td(g)
        assert verify_matched_elim_tree(g, t)
        assert d <= m <= max(2, 2 * d - 2)
        assert m <= 1 + smallest_maximal_matching_size(g)
        w, dec = exact_mtw(g)
        assert verify_matched_td(g, dec)
        assert w <= m + 1
        lifted = lift_td_to_mtd(g, exact_td(g)[1])
        assert verify_matched_elim_tree(g, lifted) and lifted.depth() <= max(2, 2 * d - 2)


@pytest.mark.parametrize("graphs", [SMALL, EIGHT], ids=["exhaustive-le7", "sample-8"])
def test_mtd3_characterisation(graphs):
    for g in graphs:
        if exact_td(g)[0] == 3:
            assert (exact_mtd(g)[0] == 3) == forbidden_mtd3_free(g), g.edges()


@pytest.mark.parametrize("graphs", [SMALL, EIGHT], ids=["exhaustive-le7", "sample-8"])
def test_partial_two_tree_characterisations(graphs):
    c5, x = cycle(5), graph_x()
    for g in graphs:
        tw, _ = exact_tw(g)
        if tw != 2:
            continue
        w = exact_mtw(g)[0]
        assert (w == 2) == (not is_induced_minor(c5, g)), g.edges()
        assert (w <= 3) == (not is_induced_minor(x, g)), g.edges()


def test_mtd_of_connected_induced_subgraphs():
    rng = random.Random(21)
    graphs = rng.sample([g for g in SMALL if g.vertex_count == 7], 60)
    for g in graphs:
        m = exact_mtd(g)[0]
        bound = m if m % 2 == 0 else m + 1
        for r in range(2, 7):
            for sub in itertools.combinations(range(7), r):
                h = g.induced(sub)
                if h.is_connected():
                    assert exact_mtd(h)[0] <= bound


def test_tw_witness_from_ordering():
    g = cycle(6)
    d = decomposition_from_ordering(g, list(range(6)))
    assert verify_td(g, d)
    for bag in d.bags:
        assert len(bits(sum(1 << v for v in bag))) == len(bag)
