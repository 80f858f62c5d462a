"""Constant-space homomorphism counting over a matched elimination tree.

A ``HEAD`` vertex v and all of its ``MATE`` children are placed together by
walking the host's arcs (x, y) grouped by source x: v goes to x and each mate
u to some y adjacent to x.  Per mate a running sum s_u collects the products
of its subtrees' counts; when the walk leaves source x the product of the s_u
is added to the total and the sums are reset.  An ``END`` child w of a mate u
is placed on a neighbour of u's image.

Only a fixed number of integers per tree level is live at any time.
"""

from __future__ import annotations

from ..decomp.elimtree import END, HEAD, DecompositionError, EliminationTree, matched_roles
from ..graph import Graph


class _Plan:
    __slots__ = ("children", "roles", "back", "anchor")

    def __init__(self, g: Graph, t: EliminationTree):
        roles = t.roles
        if roles is None or not _roles_ok(g, t, roles):
            roles = matched_roles(g, t)
        if roles is None:
            raise DecompositionError("tree is not a matched elimination tree of the pattern")
        self.roles = roles
        ch = t.children()
        self.children = [tuple(c) for c in ch]
        levels = t.levels()
        # neighbours placed before v: its tree ancestors
        self.back = [tuple(u for u in g.adjacency[v] if levels[u] < levels[v]) for v in range(g.vertex_count)]
        # nearest placed neighbour, used to restrict the sources of a head
        self.anchor = [max(self.back[v], key=lambda u: levels[u]) if self.back[v] else -1
                       for v in range(g.vertex_count)]


def _roles_ok(g, t, roles) -> bool:
    from ..decomp.elimtree import roles_are_valid, verify_elim_tree
    return verify_elim_tree(g, t) and roles_are_valid(g, t, roles)


def count_hom_mtd(g: Graph, t: EliminationTree, h: Graph, *, anchored: bool = True) -> int:
    """Number of homomorphisms g -> h using the matched elimination tree t.

    ``anchored=False`` walks every host arc at every head, exactly as in the
    textbook loop.  ``anchored=True`` (default) walks only sources adjacent to
    the image of an already placed neighbour of the head; arcs from other
    sources would fail the validity check anyway, so the count is identical.
    """
    if g.vertex_count == 1:
        return h.vertex_count
    if h.vertex_count == 0:
        return 0
    plan = _Plan(g, t)
    return _count(plan, t.root, h, anchored)


def _count(plan: _Plan, root: int, h: Graph, anchored: bool) -> int:
    hadj = h.adjacency
    hset = h.neighbor_sets
    children = plan.children
    roles = plan.roles
    back = plan.back
    anchor = plan.anchor
    sigma = [-1] * len(children)
    all_sources = range(h.vertex_count)

    def fits(a: int, img: int) -> bool:
        s = hset[img]
        for b in back[a]:
            if sigma[b] not in s:
                return False
        return True

    def subtree_product(u: int) -> int:
        """Product over u's children, with u already placed."""
        prod = 1
        for w in children[u]:
            if roles[w] == END:
                c = 0
                for z in hadj[sigma[u]]:
                    if fits(w, z):
                        sigma[w] = z
                        p = 1
                        for hd in children[w]:
                            p *= head(hd)
                            if not p:
                                break
                        c += p
                sigma[w] = -1
            else:
                c = head(w)
            prod *= c
            if not prod:
                return 0
        return prod

    def head(v: int) -> int:
        mates = children[v]
        k = len(mates)
        total = 0
        a = anchor[v]
        sources = hadj[sigma[a]] if anchored and a >= 0 else all_sources
        sums = [0] * k
        for x in sources:
            nbrs = hadj[x]
            if not nbrs or not fits(v, x):
                continue
            sigma[v] = x
            for i in range(k):
                sums[i] = 0
            for y in nbrs:
                for i in range(k):
                    u = mates[i]
                    if fits(u, y):
                        sigma[u] = y
                        sums[i] += subtree_product(u)
                        sigma[u] = -1
            prod = 1
            for i in range(k):
                prod *= sums[i]
            total += prod
        sigma[v] = -1
        return total

    if roles[root] != HEAD:
        raise DecompositionError("root must be a head")
    return head(root)
