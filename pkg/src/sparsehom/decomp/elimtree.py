"""Elimination trees, matched elimination trees, and exact treedepth searches.

A tree is stored as a parent array over the pattern's vertices.  The
elimination property is the strict recursive one: the subtrees hanging below a
node are exactly the connected components left after deleting that node.

Matched trees carry a role per vertex:

* ``HEAD`` starts a pair; all of its children are its partners (``MATE``).
* ``MATE`` closes a pair.  Each child is either a new ``HEAD`` or an ``END``.
* ``END`` extends the pair above it into an induced path on three vertices
  (the pair's ``MATE`` is the middle vertex).  At most one ``END`` per
  root-to-leaf path, and its children are ``HEAD`` again.

A root-to-leaf path satisfies the even/odd matching condition exactly when its
vertices admit such a labelling, so roles are just a convenient certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..graph import Graph, bits, mask_components

HEAD, MATE, END = 0, 1, 2
ROLE_NAMES = {HEAD: "head", MATE: "mate", END: "end"}

SEARCH_LIMIT = 16


class DecompositionError(ValueError):
    """Structurally invalid decomposition or unsupported input."""


@dataclass(frozen=True)
class EliminationTree:
    root: int
    parent: tuple[int, ...]          # parent[root] == -1
    roles: tuple[int, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return ch

    def levels(self) -> list[int]:
        """Number of vertices from the root down to each vertex (root is 1)."""
        lev = [0] * self.n
        for v in self._topological():
            p = self.parent[v]
            lev[v] = 1 if p < 0 else lev[p] + 1
        return lev

    def depth(self) -> int:
        return max(self.levels(), default=0)

    def _topological(self) -> list[int]:
        ch = self.children()
        order = [self.root]
        for v in order:
            order.extend(ch[v])
        return order

    def root_to_leaf_paths(self) -> list[list[int]]:
        ch = self.children()
        out = []

        def walk(v, prefix):
            prefix = prefix + [v]
            if not ch[v]:
                out.append(prefix)
            for c in ch[v]:
                walk(c, prefix)

        walk(self.root, [])
        return out

    def with_roles(self, roles: Sequence[int] | None) -> "EliminationTree":
        return EliminationTree(self.root, self.parent, None if roles is None else tuple(roles))


def tree_from_children(n: int, root: int, children: dict[int, list[int]], roles=None) -> EliminationTree:
    parent = [-1] * n
    for p, cs in children.items():
        for c in cs:
            parent[c] = p
    return EliminationTree(root, tuple(parent), None if roles is None else tuple(roles))


# verification -------------------------------------------------------------

def _check_shape(g: Graph, t: EliminationTree):
    if t.n != g.vertex_count:
        raise DecompositionError(
            f"tree covers {t.n} vertices but the graph has {g.vertex_count}")
    if not 0 <= t.root < t.n or t.parent[t.root] != -1:
        raise DecompositionError("root must have parent -1")
    if any(p == -1 for v, p in enumerate(t.parent) if v != t.root):
        raise DecompositionError("more than one root")
    if any(not -1 <= p < t.n for p in t.parent):
        raise DecompositionError("parent id out of range")


def _is_tree(t: EliminationTree) -> bool:
    seen = set(t._topological())
    return len(seen) == t.n


def verify_elim_tree(g: Graph, t: EliminationTree) -> bool:
    """True iff ``t`` is an elimination tree of the connected graph ``g``."""
    _check_shape(g, t)
    if not _is_tree(t) or not g.is_connected():
        return False
    ch = t.children()
    sub = [0] * t.n
    for v in reversed(t._topological()):
        sub[v] = (1 << v) | sum(sub[c] for c in ch[v])
    masks = g.masks
    for v in range(t.n):
        comps = sorted(mask_components(masks, sub[v] & ~(1 << v)))
        if comps != sorted(sub[c] for c in ch[v]):
            return False
    return True


def matched_roles(g: Graph, t: EliminationTree) -> tuple[int, ...] | None:
    """A role labelling certifying that ``t`` is matched, or None."""
    if not verify_elim_tree(g, t):
        return None
    ch = t.children()
    par = t.parent
    # feasible[v] is a set of states: ("H", used) / ("M", used) / ("E",)
    feas: dict[int, set] = {}
    for v in reversed(t._topological()):
        p = par[v]
        adj_p = p >= 0 and g.has_edge(v, p)
        f = set()
        for used in (0, 1):
            if ch[v] and all(("M", used) in feas[c] for c in ch[v]):
                f.add(("H", used))
            if adj_p and all(("H", used) in feas[c] or (used == 0 and ("E",) in feas[c])
                             for c in ch[v]):
                f.add(("M", used))
        if adj_p and all(("H", 1) in feas[c] for c in ch[v]):
            f.add(("E",))
        feas[v] = f
    if ("H", 0) not in feas[t.root]:
        return None
    roles = [HEAD] * t.n
    state = {t.root: ("H", 0)}
    for v in t._topological():
        st = state[v]
        if st[0] == "H":
            roles[v] = HEAD
            for c in ch[v]:
                state[c] = ("M", st[1])
        elif st[0] == "M":
            roles[v] = MATE
            for c in ch[v]:
                state[c] = ("H", st[1]) if ("H", st[1]) in feas[c] else ("E",)
        else:
            roles[v] = END
            for c in ch[v]:
                state[c] = ("H", 1)
    return tuple(roles)


def roles_are_valid(g: Graph, t: EliminationTree, roles: Sequence[int]) -> bool:
    """Check an explicit role labelling against the rules in the module docstring."""
    ch = t.children()
    if roles[t.root] != HEAD:
        return False
    for v in t._topological():
        r = roles[v]
        p = t.parent[v]
        if r == HEAD:
            if not ch[v] or any(roles[c] != MATE for c in ch[v]):
                return False
        elif r == MATE:
            if p < 0 or roles[p] != HEAD or not g.has_edge(v, p):
                return False
        else:
            if p < 0 or roles[p] != MATE or not g.has_edge(v, p):
                return False
            if any(roles[c] != HEAD for c in ch[v]):
                return False
    for path in t.root_to_leaf_paths():
        if sum(1 for v in path if roles[v] == END) > 1:
            return False
        if roles[path[-1]] == HEAD:
            return False
    return True


def path_is_matched(g: Graph, path: Sequence[int]) -> bool:
    """The even/odd matching condition for one root-to-leaf vertex sequence."""
    k = len(path)
    if k % 2 == 0:
        return all(g.has_edge(path[i], path[i + 1]) for i in range(0, k, 2))
    if k < 3:
        return False
    # pivot at 0-based index i (odd); triple path[i-1], path[i], path[i+1]
    for i in range(1, k - 1, 2):
        ok = g.has_edge(path[i - 1], path[i]) and g.has_edge(path[i], path[i + 1])
        ok = ok and all(g.has_edge(path[j], path[j + 1]) for j in range(0, i - 1, 2))
        ok = ok and all(g.has_edge(path[j], path[j + 1]) for j in range(i + 2, k, 2))
        if ok:
            return True
    return False


def verify_matched_elim_tree(g: Graph, t: EliminationTree) -> bool:
    """Valid elimination tree whose every root-to-leaf path is matched."""
    if not verify_elim_tree(g, t):
        return False
    return all(path_is_matched(g, p) for p in t.root_to_leaf_paths())


# exact searches -------------------------------------------------------------

INF = float("inf")


def _require_connected(g: Graph, limit: int):
    if g.vertex_count == 0 or not g.is_connected():
        raise DecompositionError("graph must be connected and nonempty")
    if g.vertex_count > limit:
        raise DecompositionError(f"exact search limited to {limit} vertices")


def exact_td(g: Graph, limit: int = SEARCH_LIMIT) -> tuple[int, EliminationTree]:
    """Treedepth with an optimal elimination tree."""
    _require_connected(g, limit)
    masks = g.masks
    memo: dict[int, tuple[int, int]] = {}

    def best(c: int) -> int:
        hit = memo.get(c)
        if hit is not None:
            return hit[0]
        if c & (c - 1) == 0:
            memo[c] = (1, c.bit_length() - 1)
            return 1
        bound = INF
        arg = -1
        for r in bits(c):
            worst = 0
            for k in mask_components(masks, c & ~(1 << r)):
                worst = max(worst, best(k))
                if worst + 1 >= bound:
                    break
            if worst + 1 < bound:
                bound, arg = worst + 1, r
        memo[c] = (bound, arg)
        return bound

    full = (1 << g.vertex_count) - 1
    depth = best(full)
    children: dict[int, list[int]] = {}

    def build(c: int) -> int:
        r = memo[c][1]
        children[r] = [build(k) for k in mask_components(masks, c & ~(1 << r))]
        return r

    root = build(full)
    return depth, tree_from_children(g.vertex_count, root, children)


# states for the matched search
_H0, _H1, _M0, _M1, _E = range(5)
_ROLE_OF = {_H0: HEAD, _H1: HEAD, _M0: MATE, _M1: MATE, _E: END}


def exact_mtd(g: Graph, budget: int | None = None, limit: int = SEARCH_LIMIT):
    """Minimum-depth matched elimination tree.

    Returns ``(depth, tree)`` or None when the optimum exceeds ``budget``.
    """
    _require_connected(g, limit)
    if g.vertex_count == 1:
        raise DecompositionError("a single vertex has no matched elimination tree")
    masks = g.masks
    memo: dict[tuple[int, int, int], tuple] = {}

    def child_options(state: int):
        if state in (_H0, _H1):
            return (_M0 if state == _H0 else _M1,)
        if state == _M0:
            return (_H0, _E)
        if state == _M1:
            return (_H1,)
        return (_H1,)

    def best(c: int, pmask: int, state: int):
        if state in (_H0, _H1):
            pmask = 0
        key = (c, pmask, state)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        bound = INF
        choice = None
        cands = c if state in (_H0, _H1) else c & pmask
        opts = child_options(state)
        for r in bits(cands):
            rest = c & ~(1 << r)
            if not rest:
                if state in (_H0, _H1):
                    continue
                if 1 < bound:
                    bound, choice = 1, (r, ())
                continue
            worst = 0
            picks = []
            for k in mask_components(masks, rest):
                kp = masks[r] & k
                val, opt = min(((best(k, kp, o), o) for o in opts), key=lambda x: x[0])
                picks.append((k, opt))
                worst = max(worst, val)
                if worst + 1 >= bound:
                    break
            if worst + 1 < bound:
                bound, choice = worst + 1, (r, tuple(picks))
        memo[key] = (bound, choice)
        return bound

    full = (1 << g.vertex_count) - 1
    depth = best(full, 0, _H0)
    if depth == INF:
        raise AssertionError("connected graphs with an edge always have a matched tree")
    if budget is not None and depth > budget:
        return None
    children: dict[int, list[int]] = {}
    roles = [HEAD] * g.vertex_count

    def build(c, pmask, state):
        if state in (_H0, _H1):
            pmask = 0
        r, picks = memo[(c, pmask, state)][1]
        roles[r] = _ROLE_OF[state]
        children[r] = [build(k, masks[r] & k, o) for k, o in picks]
        return r

    root = build(full, 0, _H0)
    return int(depth), tree_from_children(g.vertex_count, root, children, roles)


def mtd(g: Graph) -> int:
    return exact_mtd(g)[0]


def td(g: Graph) -> int:
    return exact_td(g)[0]


# constructive bound: matched depth at most 2*depth - 2 -----------------------

def lift_td_to_mtd(g: Graph, t: EliminationTree) -> EliminationTree:
    """Turn an elimination tree of depth d >= 2 into a matched one of depth <= 2d-2.

    Each top vertex r of a connected piece is paired with a neighbour w inside
    every component below it.  What remains of that component under w either is
    a single vertex (which closes a path of three with r and w) or is handled
    recursively with the original tree's order restricted to it.
    """
    if not verify_elim_tree(g, t):
        raise DecompositionError("input is not a valid elimination tree")
    if g.vertex_count < 2:
        raise DecompositionError("need at least two vertices")
    level = t.levels()
    masks = g.masks
    children: dict[int, list[int]] = {}
    roles = [HEAD] * g.vertex_count

    def top(c: int) -> int:
        return min(bits(c), key=lambda v: (level[v], v))

    def lift(c: int) -> int:
        r = top(c)
        roles[r] = HEAD
        children[r] = []
        for d in mask_components(masks, c & ~(1 << r)):
            w = min(bits(masks[r] & d), key=lambda v: (level[v], v))
            roles[w] = MATE
            children[r].append(w)
            children[w] = []
            for k in mask_components(masks, d & ~(1 << w)):
                if k & (k - 1) == 0:
                    leaf = k.bit_length() - 1
                    roles[leaf] = END
                    children[leaf] = []
                    children[w].append(leaf)
                else:
                    children[w].append(lift(k))
        return r

    root = lift((1 << g.vertex_count) - 1)
    return tree_from_children(g.vertex_count, root, children, roles)


def smallest_maximal_matching_size(g: Graph) -> int:
    """Vertices covered by a smallest maximal matching (brute force, small graphs)."""
    edges = g.edges()
    best = None

    def rec(i, used, count):
        nonlocal best
        if best is not None and count >= best:
            return
        if i == len(edges):
            if all((used >> u) & 1 or (used >> v) & 1 for u, v in edges):
                best = count
            return
        u, v = edges[i]
        if not (used >> u) & 1 and not (used >> v) & 1:
            rec(i + 1, used | (1 << u) | (1 << v), count + 2)
        rec(i + 1, used, count)

    rec(0, 0, 0)
    return best or 0


def forbidden_mtd3_free(g: Graph) -> bool:
    """No induced C4, P6 or triangle-with-3-tail (T33)."""
    from itertools import combinations

    from ..canon import canonical_form
    from ..graph import cycle, path, tadpole

    targets = {4: {canonical_form(cycle(4))}, 6: {canonical_form(path(6)), canonical_form(tadpole(3, 3))}}
    for k, forms in targets.items():
        for s in combinations(range(g.vertex_count), k):
            sub = g.induced(s)
            if sub.edge_count in (4, 5, 6) and canonical_form(sub) in forms:
                return False
    return True
