"""Exact brute-force solvers used as ground truth for everything else.

``oracle_solve`` is an edge-driven backtracking search: take the lowest
uncovered edge, decide which endpoint centers the star through it, its
length and its remaining leaves.  ``naive_solve`` is a deliberately dumb
second route (all orientations, then an exact per-vertex packing) used to
check the first one on tiny graphs.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .core import (Answer, BudgetClock, BudgetExceeded, Instance, SearchBudget, SolveReport,
                   Star, StarDecomposition, size_mismatch, stars_from_assignment, timed)

__all__ = ["SearchBudget", "oracle_solve", "enumerate_all_witnesses", "naive_solve",
           "WitnessEnumeration"]


class _Search:
    def __init__(self, instance: Instance, clock: BudgetClock, collect: bool):
        g = instance.graph
        self.edges = list(g.edges)
        self.rem = list(g.multiplicity)
        self.n = g.n
        self.inc: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        for e, (u, v) in enumerate(self.edges):
            self.inc[u].append((e, v))
            self.inc[v].append((e, u))
        self.rdeg = g.degrees()
        self.s = list(instance.spec.s)
        self.cnt = list(instance.spec.a)
        self.left = g.size
        self.clock = clock
        self.collect = collect
        self.found: list[tuple[Star, ...]] = []
        self.seen: set = set()
        self.stack: list[Star] = []
        self.solution: list[Star] = []

    # --- pruning -----------------------------------------------------------------
    def _feasible(self) -> bool:
        rdeg, s, cnt = self.rdeg, self.s, self.cnt
        need = 0
        for i in range(len(s) - 1, -1, -1):
            need += cnt[i]
            if need and sum(r // s[i] for r in rdeg) < need:
                return False
        # every vertex's out-degree is a subset sum of the remaining lengths
        cap = max(rdeg, default=0)
        reach = 1
        mask = (1 << (cap + 1)) - 1
        for x, k in zip(s, cnt):
            for _ in range(k):
                reach = (reach | (reach << x)) & mask
                if reach == mask:
                    break
        best, top = [], 0
        for r in range(cap + 1):
            if reach >> r & 1:
                top = r
            best.append(top)
        return sum(best[r] for r in rdeg) >= self.left

    # --- search ------------------------------------------------------------------
    def run(self) -> bool:
        if not self._feasible():
            return False
        return self._search(0)

    def _search(self, first: int) -> bool:
        self.clock.tick()
        rem = self.rem
        e = first
        while e < len(rem) and rem[e] == 0:
            e += 1
        if e == len(rem):
            return self._record()
        u, v = self.edges[e]
        for center, other in ((u, v), (v, u)):
            for i in range(len(self.s) - 1, -1, -1):
                ell = self.s[i]
                if self.cnt[i] == 0 or ell > self.rdeg[center]:
                    continue
                if ell == 1 and center == v:
                    continue  # a single edge was already tried from the other endpoint
                self.cnt[i] -= 1
                rem[e] -= 1
                self.rdeg[other] -= 1
                done = False
                for extra in self._leaf_choices(center, ell - 1):
                    leaves = [other] + [self.edges[f][0] + self.edges[f][1] - center
                                        for f in extra]
                    self._apply(center, extra, ell)
                    self.stack.append(Star(center, tuple(leaves)))
                    done = self._feasible() and self._search(e)
                    self.stack.pop()
                    self._undo(center, extra, ell)
                    if done and not self.collect:
                        break
                self.rdeg[other] += 1
                rem[e] += 1
                self.cnt[i] += 1
                if done and not self.collect:
                    return True
        return False

    def _leaf_choices(self, center: int, k: int):
        """Multisets of ``k`` uncovered incident edge ids at ``center``."""
        avail = [(e, self.rem[e]) for e, _ in self.inc[center] if self.rem[e] > 0]

        def rec(pos, k):
            if k == 0:
                yield []
                return
            if pos == len(avail):
                return
            e, r = avail[pos]
            for take in range(min(r, k), -1, -1):
                for rest in rec(pos + 1, k - take):
                    yield [e] * take + rest

        return rec(0, k)

    def _apply(self, center, extra, ell):
        for f in extra:
            self.rem[f] -= 1
            a, b = self.edges[f]
            self.rdeg[a + b - center] -= 1
        self.rdeg[center] -= ell
        self.left -= ell

    def _undo(self, center, extra, ell):
        for f in extra:
            self.rem[f] += 1
            a, b = self.edges[f]
            self.rdeg[a + b - center] += 1
        self.rdeg[center] += ell
        self.left += ell

    def _record(self) -> bool:
        if not self.collect:
            self.solution = list(self.stack)
        else:
            dec = StarDecomposition(tuple(self.stack)).canonical()
            if dec.stars not in self.seen:
                self.seen.add(dec.stars)
                self.found.append(dec.stars)
        return True


def oracle_solve(instance: Instance, budget: SearchBudget | None = None) -> SolveReport:
    """Exact answer, or UNKNOWN if the budget runs out first."""
    stats: dict = {}
    with timed(stats):
        early = size_mismatch(instance, "oracle")
        if early is not None:
            return early
        search = _Search(instance, BudgetClock(budget), collect=False)
        try:
            ok = search.run()
        except BudgetExceeded:
            stats["nodes"] = search.clock.nodes
            return SolveReport.unknown(instance, "oracle", **stats)
        stats["nodes"] = search.clock.nodes
    if ok:
        return SolveReport.yes(instance, StarDecomposition(tuple(search.solution)),
                               "oracle", **stats)
    return SolveReport.no(instance, "oracle", **stats)


class WitnessEnumeration(list):
    """List of canonical decompositions with a ``truncated`` flag."""
    truncated: bool = False


def enumerate_all_witnesses(instance: Instance,
                            budget: SearchBudget | None = None) -> WitnessEnumeration:
    """Every distinct decomposition (stars unordered, single edges unoriented)."""
    out = WitnessEnumeration()
    if not instance.size_ok:
        return out
    search = _Search(instance, BudgetClock(budget), collect=True)
    try:
        search.run()
    except BudgetExceeded:
        out.truncated = True
    out.extend(StarDecomposition(stars) for stars in sorted(search.found))
    return out


def _pack(targets: tuple[int, ...], s: tuple[int, ...], counts: tuple[int, ...]):
    """Split the length multiset exactly into bins with the given sums (memoized DP)."""

    @lru_cache(maxsize=None)
    def rec(i, counts):
        if i == len(targets):
            return () if not any(counts) else None
        for take in itertools.product(*(range(c + 1) for c in counts)):
            if sum(t * x for t, x in zip(take, s)) != targets[i]:
                continue
            rest = rec(i + 1, tuple(c - t for c, t in zip(counts, take)))
            if rest is not None:
                return (take,) + rest
        return None

    return rec(0, counts)


def naive_solve(instance: Instance) -> SolveReport:
    """Reference route: all orientations, then per-vertex exact packing.  Tiny graphs only."""
    early = size_mismatch(instance, "naive")
    if early is not None:
        return early
    g = instance.graph
    s, a = instance.spec.s, instance.spec.a
    for split in itertools.product(*(range(k + 1) for k in g.multiplicity)):
        out = [0] * g.n
        for (u, v), k, fwd in zip(g.edges, g.multiplicity, split):
            out[u] += fwd
            out[v] += k - fwd
        packing = _pack(tuple(out), s, a)
        if packing is None:
            continue
        out_leaves: dict[int, list[int]] = {}
        for (u, v), k, fwd in zip(g.edges, g.multiplicity, split):
            out_leaves.setdefault(u, []).extend([v] * fwd)
            out_leaves.setdefault(v, []).extend([u] * (k - fwd))
        lengths_at = {x: [ell for ell, t in zip(s, take) for _ in range(t)]
                      for x, take in enumerate(packing)}
        dec = StarDecomposition(tuple(stars_from_assignment(out_leaves, lengths_at)))
        return SolveReport.yes(instance, dec, "naive")
    return SolveReport(Answer.NO, "naive", labels=instance.labels)
