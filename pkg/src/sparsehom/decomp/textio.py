"""Plain-text formats for elimination trees and tree decompositions.

Elimination tree::

    elimtree n=<n> root=<r>
    <child> <parent>
    ...

Tree decomposition::

    treedecomp n=<n>
    bag <id>: v1 v2 ...
    link <id1> <id2>
    match <id>: u1-v1 u2-v2 ...

Blank lines and ``#`` comments are ignored; anything else is an error.
"""

from __future__ import annotations

import re

from .elimtree import DecompositionError, EliminationTree
from .treedecomp import TreeDecomposition, make_td


class DecompositionFormatError(DecompositionError):
    pass


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def dump_elimtree(t: EliminationTree) -> str:
    out = [f"elimtree n={t.n} root={t.root}"]
    out += [f"{v} {p}" for v, p in enumerate(t.parent) if p >= 0]
    return "\n".join(out) + "\n"


_ET_HEADER = re.compile(r"^elimtree\s+n=(\d+)\s+root=(\d+)$")


def parse_elimtree(text: str) -> EliminationTree:
    it = _lines(text)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise DecompositionFormatError("empty elimination tree text") from None
    m = _ET_HEADER.match(head)
    if not m:
        raise DecompositionFormatError(f"line {lineno}: expected 'elimtree n=<n> root=<r>'")
    n, root = int(m.group(1)), int(m.group(2))
    if root >= n:
        raise DecompositionFormatError("root out of range")
    parent = [-1] * n
    seen = set()
    for lineno, line in it:
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise DecompositionFormatError(f"line {lineno}: unknown directive {line!r}")
        c, p = int(parts[0]), int(parts[1])
        if c >= n or p >= n or c == root or c in seen:
            raise DecompositionFormatError(f"line {lineno}: bad parent link {line!r}")
        seen.add(c)
        parent[c] = p
    if len(seen) != n - 1:
        raise DecompositionFormatError("every non-root vertex needs exactly one parent line")
    return EliminationTree(root, tuple(parent))


def dump_treedecomp(d: TreeDecomposition, n: int) -> str:
    out = [f"treedecomp n={n}"]
    for i, b in enumerate(d.bags):
        out.append(f"bag {i}: " + " ".join(map(str, sorted(b))))
    for a, b in d.edges:
        out.append(f"link {a} {b}")
    if d.matchings is not None:
        for i, m in enumerate(d.matchings):
            out.append(f"match {i}: " + " ".join(f"{u}-{v}" for u, v in m))
    return "\n".join(out) + "\n"


_TD_HEADER = re.compile(r"^treedecomp\s+n=(\d+)$")
_BAG = re.compile(r"^bag\s+(\d+):((?:\s+\d+)*)$")
_LINK = re.compile(r"^link\s+(\d+)\s+(\d+)$")
_MATCH = re.compile(r"^match\s+(\d+):((?:\s+\d+-\d+)*)$")


def parse_treedecomp(text: str) -> tuple[int, TreeDecomposition]:
    it = _lines(text)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise DecompositionFormatError("empty tree decomposition text") from None
    m = _TD_HEADER.match(head)
    if not m:
        raise DecompositionFormatError(f"line {lineno}: expected 'treedecomp n=<n>'")
    n = int(m.group(1))
    bags: dict[int, list[int]] = {}
    links = []
    matches: dict[int, list[tuple[int, int]]] = {}
    for lineno, line in it:
        if mb := _BAG.match(line):
            i = int(mb.group(1))
            if i in bags:
                raise DecompositionFormatError(f"line {lineno}: bag {i} defined twice")
            bags[i] = [int(x) for x in mb.group(2).split()]
        elif ml := _LINK.match(line):
            links.append((int(ml.group(1)), int(ml.group(2))))
        elif mm := _MATCH.match(line):
            i = int(mm.group(1))
            matches[i] = [tuple(int(x) for x in tok.split("-")) for tok in mm.group(2).split()]
        else:
            raise DecompositionFormatError(f"line {lineno}: unknown directive {line!r}")
    if sorted(bags) != list(range(len(bags))):
        raise DecompositionFormatError("bag ids must be 0..k-1")
    if any(a not in bags or b not in bags for a, b in links):
        raise DecompositionFormatError("link refers to an undefined bag")
    if any(i not in bags for i in matches):
        raise DecompositionFormatError("match refers to an undefined bag")
    if any(v >= n for b in bags.values() for v in b):
        raise DecompositionFormatError("bag vertex out of range")
    ordered = [bags[i] for i in range(len(bags))]
    ms = None
    if matches:
        ms = [matches.get(i, []) for i in range(len(bags))]
    return n, make_td(ordered, links, ms)
