import functools
import itertools
import os
import random

import pytest

from sparsehom.canon import canonical_form
from sparsehom.graph import Graph


def random_host(rng: random.Random, n_lo: int = 1, n_hi: int = 12, p_lo: float = 0.15,
                p_hi: float = 0.6) -> Graph:
    n = rng.randint(n_lo, n_hi)
    p = rng.uniform(p_lo, p_hi)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def sparse_host(m: int, avg_degree: int = 4, seed: int = 1) -> Graph:
    """m edges on 2m/avg_degree vertices, uniform random endpoints."""
    rng = random.Random(seed)
    n = max(4, 2 * m // avg_degree)
    edges = set()
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(edges))


@functools.lru_cache(maxsize=None)
def _classes(n: int) -> tuple:
    """Canonical forms of all graphs on n vertices, by adding a vertex to each smaller class."""
    if n == 0:
        return (canonical_form(Graph.from_edges(0, [])),)
    forms = set()
    for f in _classes(n - 1):
        for mask in range(1 << (n - 1)):
            extra = [(v, n - 1) for v in range(n - 1) if mask >> v & 1]
            forms.add(canonical_form(Graph.from_edges(n, list(f.edges) + extra)))
    return tuple(sorted(forms))


def all_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of graphs on exactly n vertices."""
    return [f.to_graph() for f in _classes(n)]


def connected_graphs(max_n: int, min_n: int = 2) -> list[Graph]:
    return [g for n in range(min_n, max_n + 1) for g in all_graphs(n) if g.is_connected()]


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    # keep the user's spasm cache out of the tests unless one is given explicitly
    if "SPARSEHOM_TEST_CACHE" in os.environ:
        monkeypatch.setenv("SPARSEHOM_CACHE_DIR", os.environ["SPARSEHOM_TEST_CACHE"])
    else:
        monkeypatch.setenv("SPARSEHOM_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "spasm-cache"))


# acceptance report -----------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number} ({title}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split()[0])):
            terminalreporter.write_line(line)
