"""Bin packing instances turned into star decompositions, solved two ways.

Each source is packed exactly by dynamic programming; its images under the
two constructions must get the same answer from the exhaustive search and
from the vertex cover integer program.

Run: python demos/bin_packing_reduction.py [count]
"""
import random
import sys
import time

from stardec import oracle_solve, solve_ilp2
from stardec.reductions import (binpacking_feasible, binpacking_to_kmn, binpacking_to_tree,
                                random_binpacking)

count = int(sys.argv[1]) if len(sys.argv) > 1 else 10
rng = random.Random(0)
for k in range(count):
    bp = random_binpacking(rng, max_bins=3, max_size=4, want=(k % 2 == 0))
    packable = binpacking_feasible(bp.normalized())
    line = [f"w={bp.w} a={bp.a} m={bp.m} B={bp.B} -> {'YES' if packable else 'NO '}"]
    for name, reduce in (("K_mn", binpacking_to_kmn), ("tree", binpacking_to_tree)):
        inst, _ = reduce(bp)
        start = time.perf_counter()
        a = oracle_solve(inst).answer.value
        b = solve_ilp2(inst).answer.value
        ms = (time.perf_counter() - start) * 1000
        line.append(f"{name}[{inst.graph.n}v,{inst.graph.size}e] {a}/{b} {ms:.0f}ms")
    print("  ".join(line))
