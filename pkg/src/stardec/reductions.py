"""Instance generators with known answers, plus seeded random instances.

Three constructions turn a source problem into a decomposition instance:
unary bin packing into K_{m, B(m+1)} and into a depth-two tree, and
independent set in a cubic graph into lengths (1, 3).  The source problem is
solved independently (exact DP / brute force) so each generated instance
carries its expected answer.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Sequence

from .core import Graph, Instance, MalformedInputError, StarSpec

UNARY_LIMIT = 100_000        # total item weight; bin packing is only easy in unary


@dataclass(frozen=True)
class BinPackingInstance:
    w: tuple[int, ...]        # strictly increasing item weights
    a: tuple[int, ...]        # multiplicities
    m: int                    # bins
    B: int                    # bin size

    def __post_init__(self):
        if len(self.w) != len(self.a) or not self.w:
            raise ValueError("w and a must be nonempty and of equal length")
        if any(x < 1 for x in self.w) or any(x < 1 for x in self.a):
            raise ValueError("weights and multiplicities must be positive")
        if any(x >= y for x, y in zip(self.w, self.w[1:])):
            raise ValueError("weights must be strictly increasing")
        if self.m < 1 or self.B < 1:
            raise ValueError("need at least one bin of positive size")
        if self.total > UNARY_LIMIT or self.B * self.m > UNARY_LIMIT:
            raise ValueError(f"instance too large for unary encoding (limit {UNARY_LIMIT})")

    @property
    def total(self) -> int:
        return sum(x * k for x, k in zip(self.w, self.a))

    def items(self) -> list[int]:
        return [x for x, k in zip(self.w, self.a) for _ in range(k)]

    def normalized(self) -> "BinPackingInstance":
        """Pad with unit items so total weight equals B * m (no-op if already there or over)."""
        gap = self.B * self.m - self.total
        if gap <= 0:
            return self
        if self.w[0] == 1:
            return BinPackingInstance(self.w, (self.a[0] + gap, *self.a[1:]), self.m, self.B)
        return BinPackingInstance((1, *self.w), (gap, *self.a), self.m, self.B)


def binpacking_feasible(bp: BinPackingInstance) -> bool:
    """Exact: can every item be placed into m bins of capacity B?  DP over sorted load vectors."""
    if bp.total > bp.B * bp.m or bp.w[-1] > bp.B:
        return False
    states = {(0,) * bp.m}
    for x in sorted(bp.items(), reverse=True):
        nxt = set()
        for st in states:
            for i, load in enumerate(st):
                if load + x <= bp.B and (i == 0 or st[i - 1] != load):
                    nxt.add(tuple(sorted(st[:i] + (load + x,) + st[i + 1:])))
        if not nxt:
            return False
        states = nxt
    return True


def binpacking_to_kmn(bp: BinPackingInstance) -> tuple[Instance, bool]:
    """K_{m, B(m+1)} with lengths (m+1) w_i: all centres are forced onto the m side."""
    bp = bp.normalized()
    m, B = bp.m, bp.B
    s = tuple((m + 1) * x for x in bp.w)
    if max(s) > UNARY_LIMIT:
        raise ValueError("star length overflows the unary limit")
    big = B * (m + 1)
    edges = [(i, m + j) for i in range(m) for j in range(big)]
    return Instance(Graph(m + big, edges), StarSpec(s, bp.a)), binpacking_feasible(bp)


def binpacking_to_tree(bp: BinPackingInstance) -> tuple[Instance, bool]:
    """Depth-two tree: root with ell children, the first m of which have B children each."""
    bp = bp.normalized()
    m, B = bp.m, bp.B
    if bp.w[-1] > B:
        raise ValueError(f"item weight {bp.w[-1]} exceeds bin size {B}")
    ell = max(m, B + 2)
    edges = [(0, 1 + i) for i in range(ell)]
    nxt = 1 + ell
    for i in range(m):
        for _ in range(B):
            edges.append((1 + i, nxt))
            nxt += 1
    spec = StarSpec((*bp.w, ell), (*bp.a, 1))
    return Instance(Graph(nxt, edges), spec), binpacking_feasible(bp)


def independence_number(graph: Graph) -> int:
    adj = [frozenset(nb) for nb in graph.neighbors()]

    def best(cand: frozenset) -> int:
        if not cand:
            return 0
        v = min(cand, key=lambda x: (len(adj[x] & cand), x))
        if len(adj[v] & cand) <= 1:
            return 1 + best(cand - adj[v] - {v})
        return max(1 + best(cand - adj[v] - {v}), best(cand - {v}))

    return best(frozenset(range(graph.n)))


def indepset_to_stardec(graph: Graph, k: int) -> tuple[Instance, bool | None]:
    """Cubic G with lengths (1, 3), counts (3n/2 - 3k, k): YES iff G has k independent vertices."""
    if any(d != 3 for d in graph.degrees()) or not graph.is_simple:
        raise ValueError("graph must be simple and 3-regular")
    ones = 3 * graph.n // 2 - 3 * k
    if ones < 0 or k < 0:
        raise ValueError(f"k = {k} too large for {graph.n} vertices")
    s, a = [], []
    if ones:
        s.append(1)
        a.append(ones)
    if k:
        s.append(3)
        a.append(k)
    expected = independence_number(graph) >= k if graph.n <= 20 else None
    return Instance(graph, StarSpec(tuple(s), tuple(a))), expected


# ------------------------------------------------------------------------ random

def random_lengths(total: int, max_length: int, rng: random.Random) -> list[int]:
    out = []
    while total:
        ell = rng.randint(1, min(max_length, total))
        out.append(ell)
        total -= ell
    return out


def _graph_from_nx(g) -> Graph:
    nodes = sorted(g.nodes())
    pos = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(pos[u], pos[v]) for u, v in g.edges()])


KINDS = ("gnm", "complete", "complete-bipartite", "tree-depth-2", "cubic")


def gen_graph(kind: str, params: dict[str, Any], rng: random.Random) -> Graph:
    def need(key):
        if key not in params:
            raise MalformedInputError(f"{kind}: missing parameter '{key}'")
        val = params[key]
        if not isinstance(val, int) or val < 0:
            raise MalformedInputError(f"{kind}: parameter '{key}' must be a nonnegative integer")
        return val

    if kind == "gnm":
        n, m = need("n"), need("m")
        if m > n * (n - 1) // 2:
            raise MalformedInputError(f"gnm: {m} edges do not fit on {n} vertices")
        pairs = list(itertools.combinations(range(n), 2))
        return Graph(n, sorted(rng.sample(pairs, m)))
    if kind == "complete":
        n = need("n")
        return Graph(n, list(itertools.combinations(range(n), 2)))
    if kind == "complete-bipartite":
        p, q = need("left"), need("right")
        return Graph(p + q, [(i, p + j) for i in range(p) for j in range(q)])
    if kind == "tree-depth-2":
        k = need("k")
        most = params.get("max_children", 3)
        edges, nxt = [], 1 + k
        for i in range(k):
            edges.append((0, 1 + i))
            for _ in range(rng.randint(0, most)):
                edges.append((1 + i, nxt))
                nxt += 1
        return Graph(nxt, edges)
    if kind == "cubic":
        import networkx as nx
        n = need("n")
        if n % 2 or n < 4:
            raise MalformedInputError("cubic: n must be even and at least 4")
        return _graph_from_nx(nx.random_regular_graph(3, n, seed=rng.randrange(2 ** 32)))
    raise MalformedInputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def gen_random(kind: str, params: dict[str, Any], seed: int) -> Instance:
    """Seeded graph of the given kind with a random length multiset (or explicit s, a)."""
    rng = random.Random(seed)
    graph = gen_graph(kind, params, rng)
    if graph.size == 0:
        raise MalformedInputError(f"{kind}: generated graph has no edges")
    if "s" in params or "a" in params:
        spec, _ = StarSpec.normalized(params["s"], params["a"])
    else:
        spec = StarSpec.from_lengths(random_lengths(graph.size, params.get("max_length", 3), rng))
    return Instance(graph, spec)


def generate(kind: str, params: dict[str, Any], seed: int = 0) -> tuple[Instance, bool | None]:
    """Front door for random kinds and the three reductions (which carry an expected answer)."""
    if kind in ("binpacking-kmn", "binpacking-tree"):
        bp = BinPackingInstance(tuple(params["w"]), tuple(params["a"]), params["m"], params["B"])
        return (binpacking_to_kmn if kind == "binpacking-kmn" else binpacking_to_tree)(bp)
    if kind == "indepset":
        rng = random.Random(seed)
        graph = gen_graph("cubic", params, rng)
        return indepset_to_stardec(graph, params["k"])
    return gen_random(kind, params, seed), None


def random_binpacking(rng: random.Random, max_bins: int = 3, max_size: int = 4,
                      want: bool | None = None) -> BinPackingInstance:
    """Random source with total weight at most B * m.

    Items of weight one only pad, so they are avoided where B allows.  Small
    sources are nearly always packable; pass ``want`` to resample until the
    answer matches.
    """
    while True:
        m = rng.randint(1, max_bins)
        B = rng.randint(1, max_size)
        low = 2 if B >= 2 else 1
        # items just over half a bin cannot share one: the usual source of NO
        items = [rng.randint(B // 2 + 1, B) if rng.random() < 0.5 else rng.randint(low, B)
                 for _ in range(rng.randint(1, m * B // low))]
        if sum(items) > B * m:
            continue
        w = tuple(sorted(set(items)))
        bp = BinPackingInstance(w, tuple(items.count(x) for x in w), m, B)
        if want is None or binpacking_feasible(bp.normalized()) == want:
            return bp


def cubic_graph(n: int, seed: int) -> Graph:
    return gen_graph("cubic", {"n": n}, random.Random(seed))


__all__: Sequence[str] = (
    "BinPackingInstance", "binpacking_feasible", "binpacking_to_kmn", "binpacking_to_tree",
    "independence_number", "indepset_to_stardec", "gen_random", "generate", "KINDS",
    "random_binpacking", "cubic_graph",
)
