import itertools
import random

import numpy as np
import pytest

from sparsehom.canon import automorphisms, canonical_form
from sparsehom.constraints import LessThan, MinOf
from sparsehom.decomp import verify_matched_td
from sparsehom.graph import Graph, clique, complement_path, cycle
from sparsehom.homcount.circuit import build_hom_circuit, evaluate_circuit
from sparsehom.induced.algebra import (
    BatchPlan,
    GroupAlgebraRing,
    character_values,
    parity_coefficients,
    walsh_hadamard,
)
from sparsehom.induced.detect import detect_induced, trial_labels
from sparsehom.induced.recipes import (
    RecipeError,
    build_c6_recipe,
    build_pbar_recipe,
    odd_supergraphs,
    pbar_decomposition,
    recipe_for,
    surviving_multiplicities,
)
from sparsehom.oracle import oracle_induced_exists, oracle_sub

from conftest import all_graphs, random_host


# group algebra ---------------------------------------------------------------------

def test_generators_square_to_zero():
    rng = random.Random(1)
    for k in (4, 8, 10):
        ring = GroupAlgebraRing(k)
        for _ in range(1000 if k == 8 else 100):
            v = rng.randrange(1 << k)
            x = ring.generator(v)
            assert not ring.mul(x, x)
    ring = GroupAlgebraRing(3)
    assert not ring.generator(0)


def test_ring_axioms_on_random_elements():
    rng = random.Random(2)
    ring = GroupAlgebraRing(5)
    for _ in range(50):
        a, b, c = (ring.basis(0) + type(ring.one)(5, rng.getrandbits(32)) for _ in range(3))
        assert ring.mul(a, b) == ring.mul(b, a)
        assert ring.mul(a, ring.mul(b, c)) == ring.mul(ring.mul(a, b), c)
        assert ring.mul(a, b + c) == ring.mul(a, b) + ring.mul(a, c)
        assert ring.mul(a, ring.one) == a
    assert ring.mul(ring.basis(3), ring.basis(5)) == ring.basis(6)


def test_walsh_hadamard_is_an_involution_up_to_scale():
    a = np.random.default_rng(0).integers(-5, 5, size=(3, 16))
    assert np.array_equal(walsh_hadamard(walsh_hadamard(a)), 16 * a)


def test_character_route_equals_direct_convolution():
    recipe = build_pbar_recipe(5)
    term = recipe.terms[0]
    k = recipe.dimension
    ring = GroupAlgebraRing(k)
    rng = random.Random(3)
    for trial in range(6):
        h = random_host(rng, 6, 9, 0.4, 0.7)
        labels = trial_labels(trial, 1, h.vertex_count, k)[0]
        c = build_hom_circuit(term.supergraph, term.decomposition, h, term.constraints)
        direct = evaluate_circuit(c, ring, lambda x: ring.generator(int(labels[x])))
        chi = BatchPlan(c).evaluate(character_values(labels, k))
        coeffs = parity_coefficients(chi[None, :], k, 5)[0]
        assert [int(b) for b in coeffs] == [direct.mask >> z & 1 for z in range(1 << k)]


# recipes ---------------------------------------------------------------------------

def test_c6_recipe_shape():
    recipe = build_c6_recipe()
    assert len(recipe.terms) == 18
    assert recipe.dimension == 8
    forms = {canonical_form(t.supergraph) for t in recipe.terms}
    assert forms == {canonical_form(g) for g in odd_supergraphs(cycle(6))}
    for t in recipe.terms:
        assert t.pattern_copies % 2 == 1
        assert all(s % 2 == 1 for s in t.survivors)
        assert t.decomposition.width <= 3 and verify_matched_td(t.supergraph, t.decomposition)
        for c in t.constraints:
            assert any(c.vertices <= bag for bag in t.decomposition.bags)
    ref = next(t for t in recipe.terms if canonical_form(t.supergraph) == canonical_form(cycle(6)))
    assert ref.constraints == (MinOf(1, frozenset({1, 2, 4, 5})),)
    assert ref.survivors == (3,)


def test_kept_supergraphs_are_exactly_the_odd_ones():
    kept = {canonical_form(g) for g in odd_supergraphs(cycle(6))}
    supergraphs = [f for f in all_graphs(6) if oracle_sub(cycle(6), f) > 0]
    even = [f for f in supergraphs if oracle_sub(cycle(6), f) % 2 == 0]
    assert even
    assert kept == {canonical_form(f) for f in supergraphs if oracle_sub(cycle(6), f) % 2 == 1}
    assert canonical_form(clique(6)) not in kept     # 60 hexagons
    assert canonical_form(cycle(6).add_edges([(0, 3)])) in kept


@pytest.mark.parametrize("k", range(4, 9))
def test_pbar_decomposition(k):
    d = pbar_decomposition(k)
    g = complement_path(k)
    assert verify_matched_td(g, d)
    assert d.width == k - 3
    recipe = build_pbar_recipe(k)
    assert recipe.terms[0].constraints == (LessThan(0, k - 1),)
    assert recipe.terms[0].survivors == (1,)


def test_recipe_names():
    assert recipe_for("cycle:6").terms == build_c6_recipe().terms
    assert recipe_for("complement-path:5").pattern.edge_count == 6
    for bad in ("pbar:3", "pbar:9", "cycle:5", "pbar:x"):
        with pytest.raises(RecipeError):
            recipe_for(bad)


def _bijective_homs(g: Graph, f: Graph) -> np.ndarray:
    n = g.vertex_count
    edges = g.edges()
    out = [p for p in itertools.permutations(range(n)) if all(f.has_edge(p[u], p[v]) for u, v in edges)]
    return np.array(out, dtype=np.int16).reshape(-1, n)


def _survive(comp: np.ndarray, constraints) -> np.ndarray:
    ok = np.ones(comp.shape[:-1], dtype=bool)
    for c in constraints:
        if isinstance(c, LessThan):
            ok &= comp[..., c.a] < comp[..., c.b]
        else:
            ok &= comp[..., c.a] == comp[..., sorted(c.among)].min(axis=-1)
    return ok


def test_c6_recipe_coefficient_parity_on_every_six_vertex_graph():
    """The multilinear coefficient of a 6-set is local to the graph it induces, so
    checking every 6-vertex graph under every vertex order covers all hosts."""
    recipe = build_c6_recipe()
    labellings = np.array(list(itertools.permutations(range(6))), dtype=np.int16)
    target = canonical_form(cycle(6))
    for f in all_graphs(6):
        parity = np.zeros(len(labellings), dtype=np.int64)
        for t in recipe.terms:
            homs = _bijective_homs(t.supergraph, f)
            if len(homs):
                comp = labellings[:, homs]
                parity += _survive(comp, t.constraints).sum(axis=1)
        want = 1 if canonical_form(f) == target else 0
        assert np.all(parity % 2 == want), f.edges()


@pytest.mark.parametrize("k", [4, 5, 6])
def test_pbar_parity_identity(k):
    target = canonical_form(complement_path(k))
    for f in all_graphs(k):
        assert oracle_sub(complement_path(k), f) % 2 == (canonical_form(f) == target)


def test_surviving_multiplicities_are_odd_for_all_labellings():
    for t in build_c6_recipe().terms:
        mult = surviving_multiplicities(t.supergraph, t.constraints)
        assert np.all(mult % 2 == 1)
        assert len(mult) == 720
    assert len(automorphisms(cycle(6))) == 12


# detection ---------------------------------------------------------------------------

def test_detect_examples():
    recipe = build_c6_recipe()
    for seed in range(5):
        assert detect_induced(recipe, cycle(6), trials=16, seed=seed).found
        res = detect_induced(recipe, clique(6), trials=16, seed=seed)
        assert not res.found and str(res) == "not-found"
    assert not detect_induced(recipe, cycle(5)).found
    lonely = cycle(6).disjoint_union(clique(3))
    assert detect_induced(recipe, lonely).found


def test_detect_agrees_with_oracle_on_small_hosts():
    rng = random.Random(5)
    for name in ("c6", "pbar:5", "pbar:6"):
        recipe = recipe_for(name)
        for _ in range(15):
            h = random_host(rng, 6, 11, 0.2, 0.7)
            got = detect_induced(recipe, h)
            truth = oracle_induced_exists(recipe.pattern, h)
            if got.found:
                assert truth
            assert got.found == truth


def test_detection_is_reproducible():
    recipe = build_pbar_recipe(5)
    h = random_host(random.Random(6), 9, 9, 0.5, 0.5)
    assert detect_induced(recipe, h, seed=4) == detect_induced(recipe, h, seed=4)
    with pytest.raises(ValueError):
        detect_induced(recipe, h, trials=0)
