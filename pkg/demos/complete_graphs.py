"""Decompose K_n into stars no longer than n/2 with the expander construction.

Run: python demos/complete_graphs.py [n]
"""
import itertools
import random
import sys

from stardec import Graph, StarSpec, Instance, expander_solve, verify
from stardec.expansion import edge_expansion

n = int(sys.argv[1]) if len(sys.argv) > 1 else 8
g = Graph(n, list(itertools.combinations(range(n), 2)))
print(f"K_{n}: {g.size} edges, edge expansion {edge_expansion(g)}")

# a random multiset of lengths, none longer than n/2
rng = random.Random(1)
lengths, left = [], g.size
while left:
    ell = rng.randint(1, min(n // 2, left))
    lengths.append(ell)
    left -= ell
spec = StarSpec.from_lengths(lengths)
print(f"lengths s={spec.s} counts a={spec.a}")

rep = expander_solve(Instance(g, spec))
print(f"answer {rep.answer.value} by {rep.algorithm}, "
      f"{rep.stats['balancing_moves']} balancing moves")
for st in rep.witness.stars:
    print(f"  center {st.center}: leaves {list(st.leaves)}")
print("verified:", verify(Instance(g, spec), rep.witness))
