"""Detection recipes: which constrained homomorphism polynomials to evaluate.

Over GF(2) the induced-occurrence polynomial of a k-vertex pattern G equals

    sum over k-vertex supergraphs G' of G with #Sub(G, G') odd  of  Sub_{G'}[H]

and the multilinear part of Sub_{G'}[H] is read off a homomorphism circuit of
G' once symmetry constraints leave an odd number of automorphic copies of
each labelled occurrence.  A recipe lists those G' with a matched tree
decomposition and a constraint set whose oddness has been checked over every
labelling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..canon import automorphisms, canonical_form
from ..constraints import Constraint, LessThan, MinOf
from ..decomp.elimtree import DecompositionError
from ..decomp.treedecomp import (
    TreeDecomposition,
    attach_certificates,
    decomposition_from_ordering,
    make_td,
    mtw_at_most,
    verify_matched_td,
)
from ..graph import Graph, complement_path, cycle
from ..oracle import oracle_sub

DEFAULT_TRIALS = 32
DEFAULT_SEED = 20240607
SLACK = 2


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class RecipeTerm:
    supergraph: Graph
    decomposition: TreeDecomposition
    constraints: tuple[Constraint, ...]
    pattern_copies: int                 # #Sub(pattern, supergraph), odd
    survivors: tuple[int, ...]          # distinct per-labelling survivor counts, all odd


@dataclass(frozen=True)
class DetectionRecipe:
    name: str
    pattern: Graph
    terms: tuple[RecipeTerm, ...]
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    dimension: int = field(default=0)

    def __post_init__(self):
        if self.dimension == 0:
            object.__setattr__(self, "dimension", self.pattern.vertex_count + SLACK)


# surviving multiplicities -----------------------------------------------------

def _compositions(n: int, auts):
    """Array (n!, |A|, n): row (sigma, pi) holds the map v -> sigma[pi[v]]."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int16)
    a = np.array(auts, dtype=np.int64)
    return perms[:, a]


def _holds(comp: np.ndarray, c: Constraint) -> np.ndarray:
    if isinstance(c, LessThan):
        return comp[..., c.a] < comp[..., c.b]
    others = [x for x in c.among if x != c.a]
    return np.all(comp[..., [c.a]] <= comp[..., others], axis=-1)


def surviving_multiplicities(g: Graph, constraints) -> np.ndarray:
    """For every labelling sigma of g by 0..n-1, the number of automorphisms pi
    with sigma∘pi satisfying all constraints."""
    comp = _compositions(g.vertex_count, automorphisms(g))
    ok = np.ones(comp.shape[:2], dtype=bool)
    for c in constraints:
        ok &= _holds(comp, c)
    return ok.sum(axis=1)


def constraints_are_valid(g: Graph, constraints) -> bool:
    return bool(np.all(surviving_multiplicities(g, constraints) % 2 == 1))


def _candidate_atoms(d: TreeDecomposition) -> list[Constraint]:
    atoms: list[Constraint] = []
    seen = set()
    for bag in d.bags:
        vs = sorted(bag)
        for a, b in itertools.permutations(vs, 2):
            atoms.append(LessThan(a, b))
        for size in range(3, len(vs) + 1):
            for among in itertools.combinations(vs, size):
                for a in among:
                    atoms.append(MinOf(a, frozenset(among)))
    out = []
    for c in atoms:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def find_constraints(g: Graph, d: TreeDecomposition, max_size: int = 3):
    """Smallest constraint set, each constraint inside one bag of d, leaving an
    odd survivor count for every labelling; None if there is none up to max_size."""
    auts = automorphisms(g)
    if len(auts) % 2 == 1:
        return ()
    comp = _compositions(g.vertex_count, auts)
    atoms = _candidate_atoms(d)
    tables = []
    seen = set()
    for c in atoms:
        t = _holds(comp, c)
        key = t.tobytes()
        if key not in seen:
            seen.add(key)
            tables.append((c, t))
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(len(tables)), size):
            ok = tables[combo[0]][1]
            for i in combo[1:]:
                ok = ok & tables[i][1]
            if np.all(ok.sum(axis=1) % 2 == 1):
                return tuple(tables[i][0] for i in combo)
    return None


# recipes ----------------------------------------------------------------------

def _term(pattern: Graph, g: Graph, d: TreeDecomposition, constraints) -> RecipeTerm:
    if not verify_matched_td(g, d):
        raise RecipeError("decomposition is not matched")
    mult = surviving_multiplicities(g, constraints)
    if np.any(mult % 2 == 0):
        raise RecipeError(f"constraints {list(map(str, constraints))} leave an even survivor count")
    copies = oracle_sub(pattern, g)
    return RecipeTerm(g, d, tuple(constraints), copies, tuple(sorted(set(int(x) for x in mult))))


def c6_reference_term() -> tuple[Graph, TreeDecomposition, tuple[Constraint, ...]]:
    """C6 on 0..5 in cycle order, root bag {1,2,4,5} with the two remaining
    triangles of the hexagon as children, and sigma(1) = min over the root bag."""
    g = cycle(6)
    d = attach_certificates(g, make_td([{1, 2, 4, 5}, {2, 3, 4}, {5, 0, 1}], [(0, 1), (0, 2)]))
    return g, d, (MinOf(1, frozenset({1, 2, 4, 5})),)


def odd_supergraphs(pattern: Graph) -> list[Graph]:
    """Canonical supergraphs on the pattern's vertex set containing it an odd number of times."""
    n = pattern.vertex_count
    present = set(pattern.edges())
    chords = [e for e in itertools.combinations(range(n), 2) if e not in present]
    forms = {}
    for r in range(len(chords) + 1):
        for extra in itertools.combinations(chords, r):
            g = pattern.add_edges(extra)
            f = canonical_form(g)
            if f not in forms:
                forms[f] = g
    out = []
    for f in sorted(forms, key=lambda f: (len(f.edges), f.edges)):
        if oracle_sub(pattern, forms[f]) % 2 == 1:
            out.append(f.to_graph())
    return out


def decomposition_candidates(g: Graph, max_width: int = 3, max_fill: int = 2):
    """Matched decompositions of width <= max_width, distinct by bag set.

    The exact search's witness comes first.  Then come decompositions from
    every elimination ordering of g with up to ``max_fill`` extra edges, which
    force chosen non-adjacent pairs into a common bag; only those still
    matched in g itself are kept.
    """
    seen = set()
    for w in range(1, max_width + 1):
        d = mtw_at_most(g, w)
        if d is not None:
            seen.add(frozenset(d.bags))
            yield attach_certificates(g, d)
            break
    non_edges = [e for e in itertools.combinations(range(g.vertex_count), 2) if not g.has_edge(*e)]
    for r in range(max_fill + 1):
        for extra in itertools.combinations(non_edges, r):
            filled = g.add_edges(extra)
            for order in itertools.permutations(range(g.vertex_count)):
                d = decomposition_from_ordering(filled, order)
                key = frozenset(d.bags)
                if key in seen or d.width > max_width:
                    continue
                seen.add(key)
                if verify_matched_td(g, d):
                    yield attach_certificates(g, d)


def _constrained_term(pattern: Graph, g: Graph) -> RecipeTerm | str:
    """A recipe term for supergraph g, or a reason why none was found."""
    any_decomposition = False
    for size in (1, 2, 3):
        for d in decomposition_candidates(g):
            any_decomposition = True
            cons = find_constraints(g, d, max_size=size)
            if cons is not None:
                return _term(pattern, g, d, cons)
        if not any_decomposition:
            return "no matched decomposition of width <= 3"
    return "no valid constraint set"


@lru_cache(maxsize=None)
def build_c6_recipe(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> DetectionRecipe:
    pattern = cycle(6)
    c6_form = canonical_form(pattern)
    terms = []
    failures = []
    for g in odd_supergraphs(pattern):
        if canonical_form(g) == c6_form:
            ref, d, cons = c6_reference_term()
            terms.append(_term(pattern, ref, d, cons))
            continue
        res = _constrained_term(pattern, g)
        if isinstance(res, str):
            failures.append(f"{canonical_form(g).text()}: {res}")
        else:
            terms.append(res)
    if failures:
        raise RecipeError("; ".join(failures))
    return DetectionRecipe("c6", pattern, tuple(terms), trials, seed)


PBAR_RANGE = range(4, 9)


def pbar_decomposition(k: int) -> TreeDecomposition:
    """Three bags of k-2 vertices for the complement of the path 0-1-...-(k-1).

    With four consecutive path vertices j, j+1, j+2, j+3 the root misses
    {j+1, j+2} and its children miss {j, j+2} and {j+1, j+3}.  Every pair that
    is not a path edge avoids one of the three missing pairs, so all edges of
    the complement are covered.
    """
    if k not in PBAR_RANGE:
        raise RecipeError(f"complement-path size must be in {PBAR_RANGE.start}..{PBAR_RANGE.stop - 1}")
    g = complement_path(k)
    everything = set(range(k))
    j = (k - 3) // 2
    bags = [everything - {j + 1, j + 2}, everything - {j, j + 2}, everything - {j + 1, j + 3}]
    d = make_td(bags, [(0, 1), (0, 2)])
    if not verify_matched_td(g, d):
        raise DecompositionError(f"three-bag decomposition of the complement of P{k} is not matched")
    return attach_certificates(g, d)


@lru_cache(maxsize=None)
def build_pbar_recipe(k: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> DetectionRecipe:
    d = pbar_decomposition(k)
    g = complement_path(k)
    # the non-trivial automorphism reverses the path, swapping its two ends
    term = _term(g, g, d, (LessThan(0, k - 1),))
    return DetectionRecipe(f"pbar:{k}", g, (term,), trials, seed)


def recipe_for(name: str, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> DetectionRecipe:
    key = name.strip().lower()
    if key in ("c6", "cycle:6", "c:6"):
        return build_c6_recipe(trials, seed)
    for prefix in ("pbar:", "complement-path:"):
        if key.startswith(prefix):
            try:
                k = int(key[len(prefix):])
            except ValueError:
                raise RecipeError(f"bad size in {name!r}") from None
            return build_pbar_recipe(k, trials, seed)
    raise RecipeError(f"induced detection supports c6 and pbar:<k>, not {name!r}")
