import random

import pytest

from stardec.core import Answer, Graph, Instance, SearchBudget, StarDecomposition, StarSpec, verify
from stardec.oracle import enumerate_all_witnesses, naive_solve, oracle_solve

from conftest import complete, inst, path, small_graphs, specs_for, triangle

K13 = Graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.mark.parametrize("graph,s,a,expected", [
    (triangle(), (3,), (1,), Answer.NO),
    (complete(4), (3, 1), (1, 3), Answer.YES),
    (complete(4), (3,), (2,), Answer.NO),
    (path(3), (2,), (1,), Answer.YES),
])
def test_examples(graph, s, a, expected):
    rep = oracle_solve(inst(graph, s, a))
    assert rep.answer is expected and rep.algorithm == "oracle"


def test_path_witness_is_the_middle_star():
    rep = oracle_solve(inst(path(3), (2,), (1,)))
    assert rep.witness == StarDecomposition(((1, (0, 2)),))


@pytest.mark.parametrize("graph,s,a,count", [
    (K13, (3,), (1,), 1),
    (triangle(), (1, 2), (1, 1), 3),
    (triangle(), (1,), (3,), 1),
])
def test_witness_counts(graph, s, a, count):
    i = inst(graph, s, a)
    found = enumerate_all_witnesses(i)
    assert len(found) == count and not found.truncated
    assert all(verify(i, w) for w in found)
    assert len(set(found)) == count


def test_budget_gives_unknown_and_truncation():
    i = inst(complete(6), (1, 2), (3, 6))
    assert oracle_solve(i, SearchBudget(max_nodes=3)).answer is Answer.UNKNOWN
    assert enumerate_all_witnesses(i, SearchBudget(max_nodes=3)).truncated


def test_size_mismatch():
    rep = oracle_solve(inst(triangle(), (2,), (1,)))
    assert rep.answer is Answer.NO and rep.reason == "size mismatch"


def test_multigraph():
    g = Graph(3, [(0, 1), (1, 2)], (2, 1))
    assert oracle_solve(Instance(g, StarSpec((3,), (1,)))).answer is Answer.YES
    assert oracle_solve(Instance(g, StarSpec((1, 2), (1, 1)))).answer is Answer.YES
    g = Graph(2, [(0, 1)], (3,))
    assert oracle_solve(Instance(g, StarSpec((1, 2), (1, 1)))).answer is Answer.YES


def test_agrees_with_naive_reference():
    """Pruned search vs all orientations + per-vertex packing, every graph with <= 8 edges."""
    bad = []
    for g in small_graphs(8):
        for spec in specs_for(g.size, 4):
            i = Instance(g, spec)
            fast, slow = oracle_solve(i), naive_solve(i)
            if fast.answer is not slow.answer:
                bad.append((g.edges, spec))
    assert bad == []


def test_relabel_invariance():
    rng = random.Random(7)
    graphs = small_graphs(7)
    for _ in range(150):
        g = rng.choice(graphs)
        spec = rng.choice(list(specs_for(g.size, 4)))
        perm = list(range(g.n))
        rng.shuffle(perm)
        a = oracle_solve(Instance(g, spec)).answer
        b = oracle_solve(Instance(g.relabel(perm), spec)).answer
        assert a is b


def test_deterministic():
    i = inst(complete(5), (1, 2, 3), (1, 3, 1))
    assert oracle_solve(i).witness == oracle_solve(i).witness
