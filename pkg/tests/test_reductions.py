import random

import pytest

from stardec.core import Answer, MalformedInputError
from stardec.oracle import oracle_solve
from stardec.reductions import (BinPackingInstance, binpacking_feasible, binpacking_to_kmn,
                                binpacking_to_tree, cubic_graph, gen_random, generate,
                                independence_number, indepset_to_stardec, random_binpacking)

from conftest import complete, complete_bipartite


def brute_packable(bp: BinPackingInstance) -> bool:
    items = bp.items()

    def place(k, loads):
        if k == len(items):
            return True
        return any(place(k + 1, loads[:j] + (loads[j] + items[k],) + loads[j + 1:])
                   for j in range(bp.m) if loads[j] + items[k] <= bp.B)

    return place(0, (0,) * bp.m)


class TestBinPacking:
    def test_dp_matches_brute_force(self):
        rng = random.Random(11)
        for _ in range(300):
            bp = random_binpacking(rng, 3, 5)
            assert binpacking_feasible(bp) == brute_packable(bp)

    def test_validation(self):
        for args in [((2, 1), (1, 1), 1, 3), ((1,), (0,), 1, 1), ((1,), (1,), 0, 1),
                     ((), (), 1, 1), ((1,), (10 ** 6,), 1, 1)]:
            with pytest.raises(ValueError):
                BinPackingInstance(*args)

    def test_normalized_pads_with_units(self):
        assert BinPackingInstance((2,), (1,), 2, 3).normalized() == \
            BinPackingInstance((1, 2), (4, 1), 2, 3)
        assert BinPackingInstance((1,), (2,), 2, 2).normalized().a == (4,)

    def test_random_sources_hit_both_answers(self):
        rng = random.Random(2)
        assert not binpacking_feasible(random_binpacking(rng, want=False).normalized())
        assert binpacking_feasible(random_binpacking(rng, want=True).normalized())


class TestKmn:
    def test_examples(self):
        i, ok = binpacking_to_kmn(BinPackingInstance((1, 2), (2, 1), 2, 2))
        assert i.graph == complete_bipartite(2, 6)
        assert (i.spec.s, i.spec.a, ok) == ((3, 6), (2, 1), True)
        i, ok = binpacking_to_kmn(BinPackingInstance((2,), (2,), 2, 2))
        assert (i.spec.s, i.spec.a, ok) == ((6,), (2,), True)
        i, ok = binpacking_to_kmn(BinPackingInstance((1, 3), (2, 2), 2, 4))
        assert i.graph == complete_bipartite(2, 12)
        assert (i.spec.s, i.spec.a, ok) == ((3, 9), (2, 2), True)

    def test_images_solve_to_source_answer(self):
        rng = random.Random(4)
        for want in (True, False) * 10:
            bp = random_binpacking(rng, 2, 3, want)
            i, ok = binpacking_to_kmn(bp)
            assert ok is want and (oracle_solve(i).answer is Answer.YES) is want


class TestTree:
    def test_examples(self):
        i, ok = binpacking_to_tree(BinPackingInstance((1, 2), (2, 1), 2, 2))
        assert i.graph.n == 9 and (i.spec.s, i.spec.a, ok) == ((1, 2, 4), (2, 1, 1), True)
        i, ok = binpacking_to_tree(BinPackingInstance((1,), (4,), 2, 2))
        assert ok and oracle_solve(i).answer is Answer.YES

    def test_item_larger_than_bin(self):
        with pytest.raises(ValueError):
            binpacking_to_tree(BinPackingInstance((1, 3), (1, 1), 2, 2))

    def test_images_solve_to_source_answer(self):
        rng = random.Random(8)
        for want in (True, False) * 10:
            bp = random_binpacking(rng, 3, 4, want)
            i, ok = binpacking_to_tree(bp)
            assert ok is want and (oracle_solve(i).answer is Answer.YES) is want


class TestIndependentSet:
    def test_examples(self):
        i, ok = indepset_to_stardec(complete(4), 1)
        assert (i.spec.s, i.spec.a, ok) == ((1, 3), (3, 1), True)
        i, ok = indepset_to_stardec(complete(4), 2)
        assert (i.spec.s, i.spec.a, ok) == ((3,), (2,), False)
        assert oracle_solve(i).answer is Answer.NO
        i, ok = indepset_to_stardec(complete_bipartite(3, 3), 3)
        assert (i.spec.s, i.spec.a, ok) == ((3,), (3,), True)

    def test_rejections(self):
        with pytest.raises(ValueError):
            indepset_to_stardec(complete(4), 3)
        with pytest.raises(ValueError):
            indepset_to_stardec(complete(5), 1)

    def test_independence_number(self):
        assert independence_number(complete(5)) == 1
        assert independence_number(complete_bipartite(3, 4)) == 4
        assert independence_number(cubic_graph(8, 1)) in (3, 4)


class TestGenerate:
    def test_seeded(self):
        a = gen_random("gnm", {"n": 7, "m": 10}, 3)
        assert a == gen_random("gnm", {"n": 7, "m": 10}, 3)
        assert a.graph.size == 10 == a.spec.total and a.spec.max_length <= 3

    def test_kinds(self):
        for kind, params in [("complete", {"n": 5}), ("complete-bipartite", {"left": 2, "right": 3}),
                             ("tree-depth-2", {"k": 3}), ("cubic", {"n": 8}),
                             ("gnm", {"n": 5, "m": 4, "s": [1, 3], "a": [1, 1]})]:
            i, expected = generate(kind, params, 1)
            assert i.spec.total == i.graph.size and expected is None

    def test_reduction_kinds(self):
        i, ok = generate("binpacking-tree", {"w": [1, 2], "a": [2, 1], "m": 2, "B": 2})
        assert ok is True and i.spec.s == (1, 2, 4)
        i, ok = generate("indepset", {"n": 6, "k": 2}, 0)
        assert ok == (independence_number(i.graph) >= 2)

    def test_bad_params(self):
        with pytest.raises(MalformedInputError):
            generate("gnm", {"n": 3, "m": 9})
        with pytest.raises(MalformedInputError):
            generate("nope", {})
        with pytest.raises(MalformedInputError):
            generate("complete", {"n": -1})
        with pytest.raises(MalformedInputError):
            generate("cubic", {"n": 5})
