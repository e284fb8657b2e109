"""Polynomial special cases: all lengths <= 2, and cubic graphs with s = (3)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (Graph, Instance, SolveReport, SolverDefect, Star, StarDecomposition,
                   WrongCase, size_mismatch, timed)


@dataclass(frozen=True)
class ComponentStat:
    component: int
    edges: int

    @property
    def odd(self) -> bool:
        return self.edges % 2 == 1


def _incidence(g: Graph):
    """Edge copies as endpoint arrays, plus incidence in CSR form (``start``, ``inc``).

    Edges at vertex x are ``inc[start[x]:start[x + 1]]``, in edge id order, and
    ``tip[e] ^ x`` is the far end of edge e from x.
    """
    mult = np.asarray(g.multiplicity, dtype=np.int64)
    ends = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    eu = np.repeat(ends[:, 0], mult)
    ev = np.repeat(ends[:, 1], mult)
    ids = np.arange(len(eu), dtype=np.int64)
    owner = np.concatenate([eu, ev])
    order = np.argsort(owner, kind="stable")
    inc = np.concatenate([ids, ids])[order]
    start = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=g.n), out=start[1:])
    return eu.tolist(), ev.tolist(), (start.tolist(), inc.tolist(), (eu ^ ev).tolist())


def pair_edges(g: Graph) -> tuple[list[tuple[int, int, int]], list[int]]:
    """Pair up incident edges of every component by DFS post-order.

    Returns ``(pairs, leftovers)``: ``pairs`` holds ``(center, leaf1, leaf2)``
    two-paths and ``leftovers`` one edge id per odd component (the edge left
    unpaired at its DFS root).  Edge ids index edge copies in ``g.edges``
    order, multiplicities expanded.
    """
    pairs, leftovers, _ = _pair(g, _incidence(g))
    return pairs, leftovers


def _pair(g: Graph, incidence) -> tuple[list[tuple[int, int, int]], list[int], list[int]]:
    """``pair_edges`` plus the edge count of each component, in DFS root order."""
    eu, ev, (start, inc, tip) = incidence
    used = [False] * len(eu)                  # edge already claimed by some vertex
    ptr = start[:-1]                          # next incidence slot to scan, per vertex
    pending: list[list[int]] = [[] for _ in range(g.n)]
    visited = [False] * g.n
    parent_edge = [-1] * g.n
    pairs: list[tuple[int, int, int]] = []
    leftovers: list[int] = []
    sizes: list[int] = []

    for root in range(g.n):
        if visited[root] or start[root] == start[root + 1]:
            continue
        visited[root] = True
        order = [root]
        claimed = 0
        stack = [root]
        while stack:
            x = stack[-1]
            i, stop = ptr[x], start[x + 1]
            while i < stop:
                e = inc[i]
                i += 1
                if used[e]:
                    continue
                used[e] = True
                claimed += 1
                y = tip[e] ^ x
                if visited[y]:
                    pending[x].append(e)        # non-tree edge, owned by x
                else:
                    visited[y] = True
                    parent_edge[y] = e
                    order.append(y)
                    stack.append(y)
                    break
            else:
                stack.pop()
            ptr[x] = i
        sizes.append(claimed)
        for x in reversed(order):
            own = pending[x]
            pe = parent_edge[x]
            if len(own) % 2 == 1:
                if pe >= 0:
                    own.append(pe)
                else:
                    leftovers.append(own.pop())
            elif pe >= 0:
                pending[tip[pe] ^ x].append(pe)
            for j in range(0, len(own), 2):
                pairs.append((x, tip[own[j]] ^ x, tip[own[j + 1]] ^ x))
            pending[x] = []
    return pairs, leftovers, sizes


def component_stats(g: Graph) -> list[ComponentStat]:
    comp_of = {}
    comps = g.components()
    for i, c in enumerate(comps):
        for x in c:
            comp_of[x] = i
    counts = [0] * len(comps)
    for (u, _), k in zip(g.edges, g.multiplicity):
        counts[comp_of[u]] += k
    return [ComponentStat(i, c) for i, c in enumerate(counts) if c > 0]


def solve_s_le_2(instance: Instance) -> SolveReport:
    """YES iff the number of odd-size components is at most the count of single edges."""
    spec = instance.spec
    if spec.max_length > 2:
        raise WrongCase("solve_s_le_2 needs every star length <= 2")
    stats: dict = {}
    with timed(stats):
        early = size_mismatch(instance, "poly-s<=2")
        if early is not None:
            return early
        g = instance.graph
        a1 = spec.a[0] if spec.s[0] == 1 else 0
        a2 = spec.a[-1] if spec.s[-1] == 2 else 0
        incidence = _incidence(g)
        eu, ev, _ = incidence
        pairs, leftovers, sizes = _pair(g, incidence)
        odd = sum(k % 2 for k in sizes)
        stats["odd_components"] = odd
        if sum(sizes) != len(eu) or len(leftovers) != odd:
            raise SolverDefect("pairing did not account for every edge")
        if (a1 - odd) % 2:
            raise SolverDefect("parity of single edges disagrees with odd component count")
        if odd > a1:
            return SolveReport.no(instance, "poly-s<=2",
                                  reason=f"{odd} odd components > {a1} single edges", **stats)
        stars = [Star(eu[e], (ev[e],)) for e in leftovers]
        split = len(pairs) - a2
        for j, (c, x, y) in enumerate(pairs):
            if j < split:
                stars += [Star(c, (x,)), Star(c, (y,))]
            else:
                stars.append(Star(c, (x, y)))
    return SolveReport.yes(instance, StarDecomposition(tuple(stars)), "poly-s<=2", **stats)


def solve_cubic_k13(instance: Instance) -> SolveReport:
    """Max degree <= 3 and every star of length 3: centers must be one side of a bipartition."""
    g, spec = instance.graph, instance.spec
    if spec.s != (3,) or g.max_degree() > 3:
        raise WrongCase("solve_cubic_k13 needs max degree <= 3 and s = (3)")
    stats: dict = {}
    with timed(stats):
        early = size_mismatch(instance, "poly-cubic")
        if early is not None:
            return early
        adj = g.neighbors()
        deg = g.degrees()
        color = [-1] * g.n
        centers = []
        for comp in g.components():
            if len(comp) == 1:
                continue
            root = comp[0]
            color[root] = 0
            stack = [root]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if color[y] < 0:
                        color[y] = 1 - color[x]
                        stack.append(y)
                    elif color[y] == color[x]:
                        return SolveReport.no(instance, "poly-cubic",
                                              reason="component is not bipartite", **stats)
            sides = [[x for x in comp if color[x] == c] for c in (0, 1)]
            good = [side for side in sides if all(deg[x] == 3 for x in side)]
            if not good:
                return SolveReport.no(instance, "poly-cubic",
                                      reason="no side of a component is all degree 3", **stats)
            # side 0 holds comp[0], the lowest vertex, so ties prefer it
            centers.extend(good[0])
        stars = []
        for c in sorted(centers):
            leaves = []
            for y, k in adj[c].items():
                leaves.extend([y] * k)
            stars.append(Star(c, tuple(leaves)))
    return SolveReport.yes(instance, StarDecomposition(tuple(stars)), "poly-cubic", **stats)
