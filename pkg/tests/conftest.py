import functools
import itertools
import random

import networkx as nx
import pytest

from stardec.core import Graph, Instance, StarSpec


def graph_of(g) -> Graph:
    """networkx graph -> Graph, relabelling nodes 0..n-1 in sorted order."""
    nodes = sorted(g.nodes())
    pos = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(pos[u], pos[v]) for u, v in g.edges()])


def triangle() -> Graph:
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def complete(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite(p: int, q: int) -> Graph:
    return Graph(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def inst(graph: Graph, s, a) -> Instance:
    spec, _ = StarSpec.normalized(s, a)
    return Instance(graph, spec)


def partitions(total: int, largest: int):
    """Integer partitions of ``total`` with parts <= ``largest``, parts descending."""
    if total == 0:
        yield ()
        return
    for p in range(min(total, largest), 0, -1):
        for rest in partitions(total - p, p):
            yield (p, *rest)


def specs_for(m: int, largest: int):
    for p in partitions(m, largest):
        yield StarSpec.from_lengths(p)


@functools.lru_cache(maxsize=None)
def connected_graphs(n: int) -> tuple[Graph, ...]:
    """All connected simple graphs on exactly n vertices, one per isomorphism class."""
    return tuple(graph_of(g) for g in nx.graph_atlas_g()
                 if g.number_of_nodes() == n and n >= 2 and nx.is_connected(g))


@functools.lru_cache(maxsize=None)
def small_graphs(max_edges: int = 8, max_n: int = 7) -> tuple[Graph, ...]:
    """All simple graphs (atlas order) without isolated vertices and at most max_edges edges."""
    out = []
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() > max_n or g.number_of_edges() == 0:
            continue
        if g.number_of_edges() > max_edges or any(d == 0 for _, d in g.degree()):
            continue
        out.append(graph_of(g))
    return tuple(out)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance criteria: number -> one-line verdict, echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
