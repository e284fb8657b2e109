import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stardec.core import Answer, Graph, Instance, SearchBudget, StarSpec, verify
from stardec.ilp import min_vertex_cover
from stardec.oracle import oracle_solve
from stardec.vcxp import dp_feasible, vcxp_solve

from conftest import complete, complete_bipartite, connected_graphs, inst, path, specs_for, triangle


class TestDp:
    def test_examples(self):
        assert dp_feasible([2, 1], [2, 1])[0]
        assert not dp_feasible([2, 2], [3, 1])[0]
        ok, where = dp_feasible([3, 1, 1, 1], [3, 3])
        assert ok and [sum(x for x, b in zip([3, 1, 1, 1], where) if b == j) for j in (0, 1)] \
            == [3, 3]

    def test_degenerate(self):
        assert dp_feasible([], []) == (True, [])
        assert dp_feasible([1], [])[0] is False
        assert dp_feasible([2, 1], [3]) == (True, [0, 0])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 4), max_size=7), st.integers(1, 3), st.data())
def test_dp_matches_exhaustive(lengths, k, data):
    targets = data.draw(st.lists(st.integers(0, 8), min_size=k, max_size=k))
    brute = any(all(sum(x for x, b in zip(lengths, asg) if b == j) == targets[j] for j in range(k))
                for asg in itertools.product(range(k), repeat=len(lengths)))
    ok, where = dp_feasible(lengths, targets)
    assert ok == brute
    if ok:
        assert [sum(x for x, b in zip(lengths, where) if b == j) for j in range(k)] == targets


class TestSolve:
    def test_k13(self):
        g = complete_bipartite(1, 3)
        i = inst(g, (1, 2), (1, 1))
        rep = vcxp_solve(i, [0])
        assert rep.answer is Answer.YES
        assert [st.center for st in rep.witness.stars if st.length == 2] == [0]

    def test_p4(self):
        i = inst(path(4), (1, 2), (1, 1))
        rep = vcxp_solve(i, [1, 2])
        assert rep.answer is Answer.YES and verify(i, rep.witness)

    def test_triangle_no(self):
        assert vcxp_solve(inst(triangle(), (3,), (1,)), [0, 1]).answer is Answer.NO

    def test_rejects_multigraph_and_bad_cover(self):
        with pytest.raises(ValueError):
            vcxp_solve(Instance(Graph(2, [(0, 1)], (2,)), StarSpec((2,), (1,))), [0])
        with pytest.raises(ValueError):
            vcxp_solve(inst(triangle(), (1,), (3,)), [0])

    def test_budget(self):
        rep = vcxp_solve(inst(complete(6), (1, 2, 3), (3, 3, 2)), budget=SearchBudget(max_nodes=1))
        assert rep.answer is Answer.UNKNOWN

    def test_agrees_with_oracle(self):
        for n in range(2, 6):
            for g in connected_graphs(n):
                cover = min_vertex_cover(g)
                for spec in specs_for(g.size, 4):
                    i = Instance(g, spec)
                    assert vcxp_solve(i, cover).answer is oracle_solve(i).answer, (g.edges, spec)
