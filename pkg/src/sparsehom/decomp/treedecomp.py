"""Tree decompositions, matched tree decompositions, and exact width searches."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from ..graph import Graph, bits, mask_components
from .elimtree import DecompositionError, EliminationTree, matched_roles, verify_matched_elim_tree

SEARCH_LIMIT = 16
DEFAULT_WORK_LIMIT = 20_000_000


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    edges: tuple[tuple[int, int], ...]
    # per-bag matching certificate; None when not supplied
    matchings: tuple[tuple[tuple[int, int], ...], ...] | None = field(default=None)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def rooted(self, root: int = 0) -> tuple[list[int], list[list[int]], list[int]]:
        """(parent, children, top-down order) for the tree rooted at ``root``."""
        nb = self.neighbours()
        parent = [-1] * len(self.bags)
        children: list[list[int]] = [[] for _ in self.bags]
        order = [root]
        seen = {root}
        for b in order:
            for c in sorted(nb[b]):
                if c not in seen:
                    seen.add(c)
                    parent[c] = b
                    children[b].append(c)
                    order.append(c)
        return parent, children, order

    def with_matchings(self, matchings) -> "TreeDecomposition":
        return TreeDecomposition(self.bags, self.edges, tuple(tuple(m) for m in matchings))


def make_td(bags: Sequence, edges: Sequence, matchings=None) -> TreeDecomposition:
    return TreeDecomposition(tuple(frozenset(b) for b in bags),
                             tuple((min(a, b), max(a, b)) for a, b in edges),
                             None if matchings is None else tuple(tuple(m) for m in matchings))


# verification ----------------------------------------------------------------

def verify_td(g: Graph, d: TreeDecomposition) -> bool:
    n = g.vertex_count
    k = len(d.bags)
    if k == 0:
        return n == 0
    if any(v < 0 or v >= n for b in d.bags for v in b):
        return False
    if len(d.edges) != k - 1 or any(not (0 <= a < k and 0 <= b < k) or a == b for a, b in d.edges):
        return False
    _, _, order = d.rooted(0)
    if len(order) != k:
        return False
    if set().union(*d.bags) != set(range(n)):
        return False
    for u, v in g.edges():
        if not any(u in b and v in b for b in d.bags):
            return False
    nb = d.neighbours()
    for v in range(n):
        holding = [i for i, b in enumerate(d.bags) if v in b]
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen and v in d.bags[y]:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(holding):
            return False
    return True


def _perfect(masks, mask: int, memo: dict) -> tuple | None:
    """A perfect matching of the vertex set ``mask`` as a tuple of edges, or None."""
    if mask == 0:
        return ()
    if mask in memo:
        return memo[mask]
    v = (mask & -mask).bit_length() - 1
    result = None
    for u in bits(masks[v] & mask & ~(1 << v)):
        rest = _perfect(masks, mask & ~(1 << v) & ~(1 << u), memo)
        if rest is not None:
            result = ((v, u),) + rest
            break
    memo[mask] = result
    return result


def matched_certificate(g: Graph, bag, memo: dict | None = None):
    """Matching certifying that ``bag`` is matched, or None.

    Even bags need a perfect matching; odd bags need one leftover vertex
    adjacent to some matched vertex.
    """
    masks = g.masks
    memo = {} if memo is None else memo
    mask = bag if isinstance(bag, int) else sum(1 << v for v in bag)
    size = bin(mask).count("1")
    if size < 2:
        return None
    if size % 2 == 0:
        return _perfect(masks, mask, memo)
    for v in bits(mask):
        if masks[v] & mask:
            m = _perfect(masks, mask & ~(1 << v), memo)
            if m is not None:
                return m
    return None


def certificate_is_valid(g: Graph, bag, matching) -> bool:
    covered = set()
    for u, v in matching:
        if u not in bag or v not in bag or not g.has_edge(u, v) or u in covered or v in covered:
            return False
        covered.update((u, v))
    left = set(bag) - covered
    if len(left) == 0:
        return len(bag) >= 2
    if len(left) == 1:
        (x,) = left
        return any(g.has_edge(x, y) for y in covered)
    return False


def verify_matched_td(g: Graph, d: TreeDecomposition, max_width: int | None = None) -> bool:
    """Tree decomposition axioms plus every bag matched (and width bound if given)."""
    if not verify_td(g, d):
        return False
    if max_width is not None and d.width > max_width:
        return False
    if d.matchings is not None:
        if len(d.matchings) != len(d.bags):
            return False
        return all(certificate_is_valid(g, b, m) for b, m in zip(d.bags, d.matchings))
    memo: dict = {}
    return all(matched_certificate(g, b, memo) is not None for b in d.bags)


def attach_certificates(g: Graph, d: TreeDecomposition) -> TreeDecomposition:
    memo: dict = {}
    ms = []
    for b in d.bags:
        m = matched_certificate(g, b, memo)
        if m is None:
            raise DecompositionError(f"bag {sorted(b)} is not matched")
        ms.append(tuple(sorted(tuple(sorted(e)) for e in m)))
    return d.with_matchings(ms)


# treewidth -------------------------------------------------------------------

def exact_tw(g: Graph, limit: int = SEARCH_LIMIT) -> tuple[int, TreeDecomposition]:
    """Treewidth by dynamic programming over elimination prefixes."""
    n = g.vertex_count
    if n > limit:
        raise DecompositionError(f"exact treewidth limited to {limit} vertices")
    if n == 0:
        return -1, make_td([], [])
    masks = g.masks

    def q_size(s: int, v: int) -> int:
        # vertices outside s + v reachable from v through s
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            x = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            nb = masks[x] & ~seen
            seen |= nb
            out |= nb & ~s
            frontier |= nb & s
        return bin(out).count("1")

    full = (1 << n) - 1
    best = {0: -1}
    choice = {}
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            s = sum(1 << v for v in combo)
            val = None
            arg = -1
            for v in combo:
                rest = s & ~(1 << v)
                cand = max(best[rest], q_size(rest, v))
                if val is None or cand < val:
                    val, arg = cand, v
            best[s] = val
            choice[s] = arg
    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s &= ~(1 << v)
    order.reverse()
    d = decomposition_from_ordering(g, order)
    return best[full], d


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition from an elimination ordering (first eliminated first)."""
    n = g.vertex_count
    pos = {v: i for i, v in enumerate(order)}
    nb = [set(a) for a in g.adjacency]
    bags = []
    owner = {}
    for v in order:
        later = {u for u in nb[v] if pos[u] > pos[v]}
        bags.append(frozenset(later | {v}))
        owner[v] = len(bags) - 1
        for a in later:
            nb[a] |= later - {a}
    edges = []
    for i, v in enumerate(order):
        later = bags[i] - {v}
        if later:
            nxt = min(later, key=lambda u: pos[u])
            edges.append((i, owner[nxt]))
    # components of a disconnected graph: chain the separate trees together
    parent = list(range(len(bags)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    roots = sorted({find(i) for i in range(len(bags))})
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    d = make_td(bags, edges)
    return _reduce(d) if n else d


def _reduce(d: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose one bag contains the other."""
    bags = [set(b) for b in d.bags]
    nb = [set(x) for x in d.neighbours()]
    alive = set(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for a in sorted(alive):
            for b in sorted(nb[a]):
                if bags[a] <= bags[b]:
                    for c in nb[a] - {b}:
                        nb[c].discard(a)
                        nb[c].add(b)
                        nb[b].add(c)
                    nb[b].discard(a)
                    alive.discard(a)
                    changed = True
                    break
            if changed:
                break
    ids = sorted(alive)
    index = {old: i for i, old in enumerate(ids)}
    edges = {(min(index[a], index[b]), max(index[a], index[b])) for a in ids for b in nb[a]}
    return make_td([bags[i] for i in ids], sorted(edges))


def tw(g: Graph) -> int:
    return exact_tw(g)[0]


# exact matched treewidth -----------------------------------------------------

class WorkLimitExceeded(DecompositionError):
    pass


def _solve_mtw(g: Graph, w: int, work_limit: int):
    """Decide matched treewidth <= w; returns a decomposition or None.

    State (C, S): C is the set of vertices not yet placed, S the vertices of
    the parent bag the subtree may still use.  A bag B with S < B <= S u C is
    chosen; the rest of C splits into groups of whole components, and each
    group g continues with some interface S_g between N(g) & B and B.
    """
    masks = g.masks
    n = g.vertex_count
    pm_memo: dict = {}
    matched_memo: dict[int, bool] = {}
    memo: dict[tuple[int, int], object] = {}
    work = [0]

    def is_matched(b: int) -> bool:
        hit = matched_memo.get(b)
        if hit is None:
            hit = matched_certificate(g, b, pm_memo) is not None
            matched_memo[b] = hit
        return hit

    def nbhd(x: int) -> int:
        out = 0
        for v in bits(x):
            out |= masks[v]
        return out & ~x

    def solve(c: int, s: int):
        """Return plan (bag, [(group, s_g), ...]) or False."""
        if c == 0:
            return ()
        key = (c, s)
        if key in memo:
            return memo[key]
        memo[key] = False
        result = False
        s_size = bin(s).count("1")
        room = w + 1 - s_size
        cverts = bits(c)
        for extra in range(1, min(room, len(cverts)) + 1):
            if result:
                break
            for combo in itertools.combinations(cverts, extra):
                work[0] += 1
                if work[0] > work_limit:
                    raise WorkLimitExceeded(f"matched-width search exceeded {work_limit} steps")
                add = 0
                for v in combo:
                    add |= 1 << v
                b = s | add
                if not is_matched(b):
                    continue
                rest = c & ~add
                plan = _cover(b, rest)
                if plan is not None:
                    result = (b, plan)
                    break
        memo[key] = result
        return result

    def group_interface(grp: int, b: int):
        need = nbhd(grp) & b
        optional = bits(b & ~need)
        for k in range(len(optional) + 1):
            if bin(need).count("1") + k > w:
                break
            for combo in itertools.combinations(optional, k):
                sg = need
                for v in combo:
                    sg |= 1 << v
                if solve(grp, sg) is not False:
                    return sg
        return None

    def _cover(b: int, rest: int):
        if rest == 0:
            return []
        comps = mask_components(masks, rest)
        k = len(comps)
        ok: dict[int, object] = {}

        def group_ok(sel: int):
            if sel not in ok:
                grp = 0
                for i in range(k):
                    if sel >> i & 1:
                        grp |= comps[i]
                ok[sel] = group_interface(grp, b)
            return ok[sel]

        cover_memo: dict[int, object] = {}

        def cover(remaining: int):
            if remaining == 0:
                return []
            if remaining in cover_memo:
                return cover_memo[remaining]
            low = remaining & -remaining
            others = remaining & ~low
            result = None
            # enumerate groups containing the lowest remaining component
            sub = others
            while True:
                sel = low | sub
                sg = group_ok(sel)
                if sg is not None:
                    tail = cover(remaining & ~sel)
                    if tail is not None:
                        grp = 0
                        for i in range(k):
                            if sel >> i & 1:
                                grp |= comps[i]
                        result = [(grp, sg)] + tail
                        break
                if sub == 0:
                    break
                sub = (sub - 1) & others
            cover_memo[remaining] = result
            return result

        return cover((1 << k) - 1)

    full = (1 << n) - 1
    plan = solve(full, 0)
    if plan is False:
        return None
    bags: list[frozenset] = []
    edges: list[tuple[int, int]] = []

    def build(c: int, s: int, parent: int):
        b, groups = solve(c, s)
        idx = len(bags)
        bags.append(frozenset(bits(b)))
        if parent >= 0:
            edges.append((parent, idx))
        for grp, sg in groups:
            build(grp, sg, idx)

    build(full, 0, -1)
    return attach_certificates(g, make_td(bags, edges))


def exact_mtw(g: Graph, budget: int | None = None, limit: int = SEARCH_LIMIT,
              work_limit: int = DEFAULT_WORK_LIMIT):
    """Minimum width of a matched tree decomposition, with a witness.

    Tries widths 1, 2, ... up to ``budget``; returns ``(width, decomposition)``
    or None when no matched decomposition of width <= budget exists.
    """
    n = g.vertex_count
    if n > limit:
        raise DecompositionError(f"exact matched-width search limited to {limit} vertices")
    if n < 2 or any(not a for a in g.adjacency):
        raise DecompositionError("every vertex needs a neighbour to lie in a matched bag")
    top = n - 1 if budget is None else min(budget, n - 1)
    for w in range(1, top + 1):
        d = _solve_mtw(g, w, work_limit)
        if d is not None:
            return d.width, d
    return None


def mtw(g: Graph) -> int:
    return exact_mtw(g)[0]


def mtw_at_most(g: Graph, w: int, work_limit: int = DEFAULT_WORK_LIMIT) -> TreeDecomposition | None:
    """Witness of matched width <= w, or None; searches only width w."""
    return _solve_mtw(g, w, work_limit)


# constructions ----------------------------------------------------------------

def matched_td_from_mtd_tree(g: Graph, t: EliminationTree) -> TreeDecomposition:
    """One bag per root-to-leaf path, chained left to right."""
    if not verify_matched_elim_tree(g, t):
        raise DecompositionError("not a matched elimination tree")
    paths = t.root_to_leaf_paths()
    bags = [frozenset(p) for p in paths]
    edges = [(i, i + 1) for i in range(len(bags) - 1)]
    return attach_certificates(g, make_td(bags, edges))


def lift_tw_to_mtw(g: Graph, d: TreeDecomposition, root: int = 0) -> TreeDecomposition:
    """Make every bag matched by adding at most one vertex per original bag vertex.

    Top-down: a bag keeps its parent's pairs that it fully contains, pairs up as
    many remaining vertices as it can, borrows the parent partner of any still
    unmatched inherited vertex, and for each unmatched new vertex either moves
    it into its own leaf bag (all neighbours already present) or pulls its
    nearest lower neighbour up along the tree path.
    """
    if not verify_td(g, d):
        raise DecompositionError("input is not a valid tree decomposition")
    if any(not a for a in g.adjacency):
        raise DecompositionError("isolated vertices cannot be matched")
    bags = [set(b) for b in d.bags]
    parent, children, order = d.rooted(root)
    children = [list(c) for c in children]
    partner: list[dict[int, int]] = [dict() for _ in bags]
    nb = g.neighbor_sets

    def subtree_path_to_neighbour(start: int, v: int):
        """BFS below ``start`` through bags holding v for a bag with an absent neighbour."""
        prev = {start: -1}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            if x != start:
                for u in sorted(nb[v] & bags[x]):
                    if u not in bags[start]:
                        path = []
                        y = x
                        while y != -1:
                            path.append(y)
                            y = prev[y]
                        return u, path
            for c in children[x]:
                if c not in prev and v in bags[c]:
                    prev[c] = x
                    queue.append(c)
        return None

    def remove_from_subtree(start: int, v: int):
        stack = [start]
        while stack:
            x = stack.pop()
            if v in bags[x]:
                bags[x].discard(v)
                stack.extend(children[x])

    queue = deque(order[:1])
    processed = set()
    while queue:
        b = queue.popleft()
        processed.add(b)
        p = parent[b]
        m = partner[b]
        if p >= 0:
            for v in sorted(bags[b] & bags[p]):
                u = partner[p].get(v)
                if u is not None and u in bags[b]:
                    m[v] = u
        free = sorted(v for v in bags[b] if v not in m)
        for v, u in _maximum_matching(g, free):
            m[v] = u
            m[u] = v
        if p >= 0:
            for v in sorted(bags[b] & bags[p]):
                if v not in m:
                    u = partner[p][v]
                    bags[b].add(u)
                    m[v] = u
                    m[u] = v
        for v in sorted(v for v in bags[b] if v not in m):
            if nb[v] <= bags[b]:
                remove_from_subtree(b, v)
                leaf = {v}
                for u in nb[v]:
                    leaf |= {u, m[u]}
                bags.append(leaf)
                children.append([])
                parent.append(b)
                children[b].append(len(bags) - 1)
                partner.append({x: m[x] for x in leaf if x != v})
                processed.add(len(bags) - 1)
            else:
                found = subtree_path_to_neighbour(b, v)
                if found is None:
                    raise AssertionError("neighbour outside the bag must occur below it")
                u, path = found
                for x in path:
                    bags[x].add(u)
                m[v] = u
                m[u] = v
        for c in children[b]:
            if c not in processed:
                queue.append(c)
    keep = [i for i, bag in enumerate(bags) if bag]
    # splice out emptied bags by attaching their children to the nearest kept ancestor
    def kept_ancestor(i):
        i = parent[i]
        while i >= 0 and not bags[i]:
            i = parent[i]
        return i

    index = {old: new for new, old in enumerate(keep)}
    edges = []
    for i in keep:
        a = kept_ancestor(i)
        if a >= 0:
            edges.append((index[a], index[i]))
    # bags with no kept ancestor (only possible if the root emptied): chain them
    tops = [index[i] for i in keep if kept_ancestor(i) < 0]
    edges += list(zip(tops, tops[1:]))
    matchings = []
    for i in keep:
        seen = set()
        pairs = []
        for v in sorted(bags[i]):
            u = partner[i].get(v)
            if u is not None and u in bags[i] and v not in seen and u not in seen:
                pairs.append((min(u, v), max(u, v)))
                seen.update((u, v))
        matchings.append(tuple(pairs))
    out = make_td([bags[i] for i in keep], edges, matchings)
    if not verify_matched_td(g, out):
        raise AssertionError("lifted decomposition failed verification")
    return out


def _maximum_matching(g: Graph, verts: Sequence[int]) -> list[tuple[int, int]]:
    """Maximum matching in G[verts] by exhaustive search (bags are small)."""
    vs = list(verts)
    best: list[tuple[int, int]] = []

    def rec(i, used, cur):
        nonlocal best
        if len(cur) + (len(vs) - i) // 2 <= len(best):
            return
        if i == len(vs):
            if len(cur) > len(best):
                best = list(cur)
            return
        v = vs[i]
        if v not in used:
            for u in vs[i + 1:]:
                if u not in used and g.has_edge(v, u):
                    used.add(v)
                    used.add(u)
                    cur.append((v, u))
                    rec(i + 1, used, cur)
                    cur.pop()
                    used.discard(v)
                    used.discard(u)
        rec(i + 1, used, cur)

    rec(0, set(), [])
    return best
