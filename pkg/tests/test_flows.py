import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stardec.core import Graph
from stardec.flows import (FlowNetwork, check_orient_conditions, check_sdr_condition, find_sdr,
                           max_flow, orient_with_outdegrees)

from conftest import complete, random_graph, triangle


def _net(n, arcs, s=0, t=None):
    net = FlowNetwork(n, s, n - 1 if t is None else t)
    for tail, head, cap in arcs:
        net.add_arc(tail, head, cap)
    return net


class TestMaxFlow:
    def test_single_arc(self):
        assert max_flow(_net(2, [(0, 1, 5)])).value == 5

    def test_parallel_paths(self):
        assert max_flow(_net(4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)])).value == 2

    def test_bottleneck(self):
        res = max_flow(_net(3, [(0, 1, 3), (1, 2, 1)]))
        assert res.value == 1 and res.flow == (1, 1)

    def test_single_use_and_negative_capacity(self):
        net = _net(2, [(0, 1, 1)])
        max_flow(net)
        with pytest.raises(RuntimeError):
            max_flow(net)
        with pytest.raises(ValueError):
            _net(2, [(0, 1, -1)])

    def test_conservation_random(self, rng):
        for _ in range(50):
            n = rng.randint(3, 8)
            arcs = [(u, v, rng.randint(0, 4)) for u in range(n) for v in range(n)
                    if u != v and rng.random() < 0.4]
            res = max_flow(_net(n, arcs))
            bal = [0] * n
            for (u, v, c), f in zip(arcs, res.flow):
                assert 0 <= f <= c
                bal[u] -= f
                bal[v] += f
            assert all(b == 0 for b in bal[1:-1]) and bal[-1] == res.value


class TestSdr:
    def test_two_sets(self):
        res = find_sdr([{1, 2}, {2, 3}], [1, 1])
        assert res and len(res.sets[0] | res.sets[1]) == 2

    def test_hall_violation(self):
        res = find_sdr([{1}, {1}], [1, 1])
        assert not res and res.violating == (0, 1)

    def test_single_set(self):
        assert find_sdr([{1, 2, 3}], [2]).sets == (frozenset({1, 2}),)

    def test_demand_validation(self):
        with pytest.raises(ValueError):
            find_sdr([{1}], [0])


class TestOrientation:
    def test_cyclic(self):
        assert orient_with_outdegrees(triangle(), [1, 1, 1])

    def test_too_much_at_one_vertex(self):
        res = orient_with_outdegrees(triangle(), [3, 0, 0])
        assert not res
        A = res.violating
        inside = sum(1 for u, v in triangle().edges if u in A and v in A)
        assert inside > sum([3, 0, 0][x] for x in A)

    def test_forced(self):
        res = orient_with_outdegrees(triangle(), [2, 1, 0])
        assert res.orientation.forward == (1, 1, 1)     # 0->1, 0->2, 1->2

    def test_multigraph(self):
        g = Graph(2, [(0, 1)], (3,))
        res = orient_with_outdegrees(g, [2, 1])
        assert res.orientation.out_degrees() == [2, 1]

    def test_conditions_examples(self):
        assert check_orient_conditions(triangle(), [1, 1, 1]) == (True, None)
        assert check_orient_conditions(triangle(), [2, 0, 1])[0]
        ok, A = check_orient_conditions(triangle(), [3, 0, 0])
        assert not ok and A == frozenset({1, 2})

    def test_conditions_cap(self):
        with pytest.raises(ValueError):
            check_orient_conditions(complete(5), [2] * 5, cap=4)


def test_orientation_equivalence_n4():
    """Flow succeeds exactly when the subset conditions hold (every graph on 4 vertices)."""
    for mask in range(1, 1 << 6):
        pairs = [p for k, p in enumerate(itertools.combinations(range(4), 2)) if mask >> k & 1]
        g = Graph(4, pairs)
        for d in itertools.product(range(4), repeat=4):
            if sum(d) != g.size:
                continue
            assert bool(orient_with_outdegrees(g, d)) == check_orient_conditions(g, d)[0]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 5), max_size=4), min_size=1, max_size=4),
       st.data())
def test_sdr_equivalence(family, data):
    demand = data.draw(st.lists(st.integers(1, 3), min_size=len(family), max_size=len(family)))
    res = find_sdr(family, demand)
    ok, _ = check_sdr_condition(family, demand)
    assert bool(res) == ok
    if res:
        for S, F, k in zip(res.sets, family, demand):
            assert S <= F and len(S) == k
        assert sum(map(len, res.sets)) == len(frozenset().union(*res.sets))
    else:
        J = res.violating
        assert len(frozenset().union(*(family[j] for j in J))) < sum(demand[j] for j in J)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(2, 6))
def test_orientation_properties(seed, n):
    rng = random.Random(seed)
    g = random_graph(rng, n, 0.6)
    d = [0] * n
    for u, v in g.edges:
        d[rng.choice((u, v))] += 1
    res = orient_with_outdegrees(g, d)
    assert res and res.orientation.out_degrees() == d
