"""Integer max-flow plus the two constructions built on it.

* ``find_sdr`` - disjoint representatives S_i of F_i with prescribed sizes,
  or a subfamily whose union is too small.
* ``orient_with_outdegrees`` - an orientation with exact out-degrees, or a
  vertex set whose internal edges exceed its total out-degree.

Both certificates are read off the source side of a minimum cut.
``check_orient_conditions`` and ``check_sdr_condition`` decide the same
questions by subset enumeration and exist to cross-check the flow route.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Sequence

from .core import Graph, SolverDefect


class FlowNetwork:
    """Residual network with paired arcs (arc ``2k`` forward, ``2k+1`` reverse).

    Single use: ``max_flow`` leaves residual state behind, which ``min_cut``
    then reads.
    """

    def __init__(self, num_nodes: int, source: int, sink: int):
        self.num_nodes = num_nodes
        self.source = source
        self.sink = sink
        self.head: list[int] = []
        self.cap: list[int] = []
        self.orig: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(num_nodes)]
        self.augmentations = 0
        self._solved = False

    def add_arc(self, tail: int, head: int, capacity: int) -> int:
        if capacity < 0:
            raise ValueError(f"negative capacity on arc {tail}->{head}")
        k = len(self.head)
        self.head += [head, tail]
        self.cap += [capacity, 0]
        self.orig += [capacity, 0]
        self.out[tail].append(k)
        self.out[head].append(k + 1)
        return k // 2

    @property
    def arcs(self) -> list[tuple[int, int, int]]:
        return [(self.head[2 * i + 1], self.head[2 * i], self.orig[2 * i])
                for i in range(len(self.head) // 2)]

    def flow_on(self, arc: int) -> int:
        return self.orig[2 * arc] - self.cap[2 * arc]

    def _bfs(self):
        parent = [-1] * self.num_nodes
        parent[self.source] = -2
        queue = deque([self.source])
        while queue:
            x = queue.popleft()
            for k in self.out[x]:
                y = self.head[k]
                if self.cap[k] > 0 and parent[y] == -1:
                    parent[y] = k
                    if y == self.sink:
                        return parent
                    queue.append(y)
        return None

    def min_cut(self) -> set[int]:
        """Nodes reachable from the source in the residual network."""
        if not self._solved:
            raise RuntimeError("min_cut needs max_flow first")
        seen = {self.source}
        queue = deque([self.source])
        while queue:
            x = queue.popleft()
            for k in self.out[x]:
                y = self.head[k]
                if self.cap[k] > 0 and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen


@dataclass(frozen=True)
class FlowResult:
    value: int
    flow: tuple[int, ...]


def max_flow(net: FlowNetwork) -> FlowResult:
    """Shortest augmenting paths; checks value == min-cut capacity before returning."""
    if net._solved:
        raise RuntimeError("FlowNetwork is single use")
    value = 0
    while True:
        parent = net._bfs()
        if parent is None:
            break
        push, y = None, net.sink
        while y != net.source:
            k = parent[y]
            push = net.cap[k] if push is None else min(push, net.cap[k])
            y = net.head[k ^ 1]
        y = net.sink
        while y != net.source:
            k = parent[y]
            net.cap[k] -= push
            net.cap[k ^ 1] += push
            y = net.head[k ^ 1]
        value += push
        net.augmentations += 1
    net._solved = True
    side = net.min_cut()
    cut = sum(c for t, h, c in net.arcs if t in side and h not in side)
    if cut != value:
        raise SolverDefect(f"max-flow {value} != min-cut {cut}")
    return FlowResult(value, tuple(net.flow_on(i) for i in range(len(net.head) // 2)))


# ------------------------------------------------------------------------- SDR

@dataclass(frozen=True)
class SdrResult:
    sets: tuple[frozenset, ...] | None
    violating: tuple[int, ...] | None = None
    augmentations: int = 0

    def __bool__(self):
        return self.sets is not None


def find_sdr(family: Sequence[Sequence[Hashable]], demand: Sequence[int]) -> SdrResult:
    """Disjoint S_i subset of F_i with |S_i| = demand[i], or a violating index set J.

    J satisfies |union of F_j, j in J| < sum of demand[j]; elements are taken in
    sorted order so the answer is deterministic.
    """
    if len(family) != len(demand):
        raise ValueError("family and demand must be parallel")
    if any(k < 1 for k in demand):
        raise ValueError("demands must be positive")
    sets = [sorted(set(f)) for f in family]
    ground = sorted(set().union(*map(set, sets))) if sets else []
    pos = {x: i for i, x in enumerate(ground)}
    k = len(sets)
    src, snk = 0, 1 + k + len(ground)
    net = FlowNetwork(snk + 1, src, snk)
    big = sum(demand) + 1
    member_arcs = []
    for i, f in enumerate(sets):
        net.add_arc(src, 1 + i, demand[i])
        for x in f:
            member_arcs.append((i, x, net.add_arc(1 + i, 1 + k + pos[x], big)))
    for j in range(len(ground)):
        net.add_arc(1 + k + j, snk, 1)
    res = max_flow(net)
    if res.value == sum(demand):
        chosen: list[set] = [set() for _ in range(k)]
        for i, x, arc in member_arcs:
            if res.flow[arc]:
                chosen[i].add(x)
        out = tuple(frozenset(c) for c in chosen)
        if any(len(c) != d for c, d in zip(out, demand)) or \
                sum(len(c) for c in out) != len(frozenset().union(*out)):
            raise SolverDefect("flow did not decode into an SDR")
        return SdrResult(out, None, net.augmentations)
    side = net.min_cut()
    viol = tuple(i for i in range(k) if 1 + i in side)
    union = set().union(*(set(sets[i]) for i in viol)) if viol else set()
    if len(union) >= sum(demand[i] for i in viol):
        raise SolverDefect("min cut did not certify a Hall violation")
    return SdrResult(None, viol, net.augmentations)


def check_sdr_condition(family: Sequence[Sequence[Hashable]], demand: Sequence[int]
                        ) -> tuple[bool, tuple[int, ...] | None]:
    """Hall-type union bound over every subfamily, by enumeration."""
    sets = [set(f) for f in family]
    for r in range(1, len(sets) + 1):
        for J in itertools.combinations(range(len(sets)), r):
            if len(set().union(*(sets[j] for j in J))) < sum(demand[j] for j in J):
                return False, J
    return True, None


# ----------------------------------------------------------------- orientation

@dataclass(frozen=True)
class Orientation:
    """``forward[e]`` copies of edge ``e = (u, v)`` (u < v) point u -> v; the rest v -> u."""
    graph: Graph
    forward: tuple[int, ...]

    def out_degrees(self) -> list[int]:
        out = [0] * self.graph.n
        for (u, v), k, f in zip(self.graph.edges, self.graph.multiplicity, self.forward):
            out[u] += f
            out[v] += k - f
        return out

    def out_leaves(self) -> dict[int, list[int]]:
        leaves: dict[int, list[int]] = {x: [] for x in range(self.graph.n)}
        for (u, v), k, f in zip(self.graph.edges, self.graph.multiplicity, self.forward):
            leaves[u].extend([v] * f)
            leaves[v].extend([u] * (k - f))
        return leaves


@dataclass(frozen=True)
class OrientResult:
    orientation: Orientation | None
    violating: frozenset | None = None
    reason: str | None = None

    def __bool__(self):
        return self.orientation is not None


def orient_with_outdegrees(graph: Graph, d_plus: Sequence[int]) -> OrientResult:
    """Orientation with out-degree ``d_plus[v]`` at every vertex, via one max-flow.

    On failure ``violating`` is a vertex set A with more internal edges than
    out-degree budget, i.e. delta(A) > |E(A, V - A)|; it is None only when the
    out-degrees do not sum to |E|.
    """
    if len(d_plus) != graph.n or any(x < 0 for x in d_plus):
        raise ValueError("d_plus must give a nonnegative value per vertex")
    m = len(graph.edges)
    if sum(d_plus) != graph.size:
        viol = frozenset(range(graph.n)) if sum(d_plus) < graph.size else None
        return OrientResult(None, viol, "out-degrees do not sum to |E|")
    src, snk = 0, 1 + m + graph.n
    net = FlowNetwork(snk + 1, src, snk)
    big = graph.size + 1
    fwd_arcs = []
    for e, ((u, v), k) in enumerate(zip(graph.edges, graph.multiplicity)):
        net.add_arc(src, 1 + e, k)
        fwd_arcs.append(net.add_arc(1 + e, 1 + m + u, big))
        net.add_arc(1 + e, 1 + m + v, big)
    for x in range(graph.n):
        net.add_arc(1 + m + x, snk, d_plus[x])
    res = max_flow(net)
    if res.value == graph.size:
        orient = Orientation(graph, tuple(res.flow[a] for a in fwd_arcs))
        if orient.out_degrees() != list(d_plus):
            raise SolverDefect("flow did not decode into the requested out-degrees")
        return OrientResult(orient)
    side = net.min_cut()
    A = frozenset(x for x in range(graph.n) if 1 + m + x in side)
    inside = sum(k for (u, v), k in zip(graph.edges, graph.multiplicity)
                 if u in A and v in A)
    if inside <= sum(d_plus[x] for x in A):
        raise SolverDefect("min cut did not certify an orientation obstruction")
    return OrientResult(None, A, "internal edges exceed out-degree budget")


@lru_cache(maxsize=64)
def _cuts(graph: Graph) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Every nonempty vertex subset, by size then lexicographically, with its boundary size."""
    out = []
    for r in range(1, graph.n + 1):
        for A in itertools.combinations(range(graph.n), r):
            inA = set(A)
            boundary = sum(k for (u, v), k in zip(graph.edges, graph.multiplicity)
                           if (u in inA) != (v in inA))
            out.append((A, boundary))
    return tuple(out)


def check_orient_conditions(graph: Graph, d_plus: Sequence[int], cap: int = 16
                            ) -> tuple[bool, frozenset | None]:
    """Subset-enumeration test of delta(V) = 0 and delta(A) <= |E(A, V - A)| for all A.

    delta(i) = deg(i) - 2 d_plus(i).  Subsets are scanned by size, then
    lexicographically; the first violator is returned.
    """
    n = graph.n
    if n > cap:
        raise ValueError(f"{n} vertices exceeds the enumeration cap {cap}")
    deg = graph.degrees()
    delta = [deg[i] - 2 * d_plus[i] for i in range(n)]
    if sum(delta) != 0:
        return False, frozenset(range(n))
    for A, boundary in _cuts(graph):
        if sum(delta[i] for i in A) > boundary:
            return False, frozenset(A)
    return True, None
