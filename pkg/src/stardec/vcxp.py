"""Exact search parameterised by a vertex cover C (XP in |C|).

Vertices outside C are grouped by neighbourhood A.  Each such vertex gets a
label (b, B): it centres b_i stars of length s_i, using exactly its edges to
B.  For every way of distributing labels over each class, and every
orientation of the edges inside C, the remaining stars must be packed into
the vertices of C with prescribed sums - a bin DP.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .core import (BudgetClock, BudgetExceeded, Instance, SearchBudget, SolveReport,
                   SolverDefect, StarDecomposition, size_mismatch, stars_from_assignment,
                   timed)

Label = tuple[tuple[int, ...], frozenset]      # (b, B)


@dataclass
class LabelSpace:
    cover: tuple[int, ...]
    d_prime: int
    classes: dict[frozenset, list[int]] = field(default_factory=dict)   # A -> I_A
    labels: dict[frozenset, list[Label]] = field(default_factory=dict)  # A -> C_A


def _bounded_compositions(lengths: Sequence[int], caps: Sequence[int], total: int
                          ) -> Iterator[tuple[int, ...]]:
    if not lengths:
        if total == 0:
            yield ()
        return
    for b in range(min(caps[0], total // lengths[0]) + 1):
        for rest in _bounded_compositions(lengths[1:], caps[1:], total - b * lengths[0]):
            yield (b, *rest)


def label_space(instance: Instance, cover: Sequence[int]) -> LabelSpace:
    g, spec = instance.graph, instance.spec
    C = tuple(sorted(set(cover)))
    inC = set(C)
    if not g.is_simple:
        raise ValueError("vcxp needs a simple graph")
    if any(u not in inC and v not in inC for u, v in g.edges):
        raise ValueError("not a vertex cover")
    d_prime = sum(1 for s_i in spec.s if s_i <= len(C))
    space = LabelSpace(C, d_prime)
    adj = g.neighbors()
    for x in range(g.n):
        if x not in inC:
            space.classes.setdefault(frozenset(adj[x]), []).append(x)
    short, caps = spec.s[:d_prime], spec.a[:d_prime]
    for A in space.classes:
        labels = []
        for r in range(len(A) + 1):
            for B in itertools.combinations(sorted(A), r):
                for b in _bounded_compositions(short, caps, r):
                    labels.append((b, frozenset(B)))
        space.labels[A] = labels
    return space


def _counts(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer vectors of length ``parts`` summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _counts(total - k, parts - 1):
            yield (k, *rest)


def dp_feasible(lengths: Sequence[int], targets: Sequence[int]
                ) -> tuple[bool, list[int] | None]:
    """Pack items of the given lengths into bins with exact sums ``targets``.

    The state is the load of the first len(targets) - 1 bins; an item left
    out of them goes to the last bin, whose load is implied.  Returns
    (feasible, bin index per item in the order given).
    """
    k = len(targets)
    if k == 0:
        return (not lengths), ([] if not lengths else None)
    if sum(lengths) != sum(targets):
        return False, None
    order = sorted(range(len(lengths)), key=lambda i: -lengths[i])
    head, last = tuple(targets[:-1]), targets[-1]
    layers: list[dict[tuple, tuple]] = [{(0,) * (k - 1): (None, -1)}]
    placed = 0
    for i in order:
        ell = lengths[i]
        placed += ell
        nxt: dict[tuple, tuple] = {}
        for state in layers[-1]:
            if placed - sum(state) <= last and state not in nxt:
                nxt[state] = (state, k - 1)
            for j in range(k - 1):
                if state[j] + ell <= head[j]:
                    new = state[:j] + (state[j] + ell,) + state[j + 1:]
                    if new not in nxt:
                        nxt[new] = (state, j)
        if not nxt:
            return False, None
        layers.append(nxt)
    if head not in layers[-1]:
        return False, None
    if placed - sum(head) != last:
        raise SolverDefect("implicit last bin does not balance")
    assign = [0] * len(lengths)
    state = head
    for depth in range(len(order), 0, -1):
        prev, j = layers[depth][state]
        assign[order[depth - 1]] = j
        state = prev
    return True, assign


def _gray_flips(k: int) -> Iterator[int]:
    """Index of the bit flipped at each step of the reflected Gray code on k bits."""
    for i in range(1, 1 << k):
        yield (i & -i).bit_length() - 1


def vcxp_solve(instance: Instance, cover: Sequence[int] | None = None,
               budget: SearchBudget | None = None) -> SolveReport:
    g, spec = instance.graph, instance.spec
    stats: dict = {}
    with timed(stats):
        early = size_mismatch(instance, "vcxp")
        if early is not None:
            return early
        if cover is None:
            from .ilp import min_vertex_cover
            cover = min_vertex_cover(g)
            if cover is None:
                raise ValueError("no small vertex cover found")
        space = label_space(instance, cover)
        C = space.cover
        pos = {u: i for i, u in enumerate(C)}
        inner = [(u, v) for u, v in g.edges if u in pos and v in pos]
        classes = sorted(space.classes, key=lambda A: min(space.classes[A]))
        clock = BudgetClock(budget)
        d = spec.d
        stats.update(cover=list(C), classes=len(classes), alphas=0, orientations=0)
        dp_cache: dict = {}

        def finish(alpha_per_class, a_rest, base, flips_state, assign, lengths):
            out: dict[int, list[int]] = {x: [] for x in range(g.n)}
            at: dict[int, list[int]] = {x: [] for x in range(g.n)}
            for A, alpha in zip(classes, alpha_per_class):
                verts = iter(space.classes[A])
                for (b, B), cnt in zip(space.labels[A], alpha):
                    for _ in range(cnt):
                        x = next(verts)
                        out[x].extend(sorted(B))
                        for u in A - B:
                            out[u].append(x)
                        for i, bi in enumerate(b):
                            at[x].extend([spec.s[i]] * bi)
            for (u, v), fwd in zip(inner, flips_state):
                if fwd:
                    out[u].append(v)
                else:
                    out[v].append(u)
            for ell, j in zip(lengths, assign):
                at[C[j]].append(ell)
            return StarDecomposition(tuple(stars_from_assignment(out, at)))

        def try_orientations(alpha_per_class, used):
            a_rest = [spec.a[i] - (used[i] if i < len(used) else 0) for i in range(d)]
            base = [0] * len(C)            # edges C -> I per cover vertex
            for A, alpha in zip(classes, alpha_per_class):
                for (b, B), cnt in zip(space.labels[A], alpha):
                    for u in A - B:
                        base[pos[u]] += cnt
            lengths = [spec.s[i] for i in range(d) for _ in range(a_rest[i])]
            lengths.sort(reverse=True)
            state = [1] * len(inner)       # all inner edges point low -> high
            targets = list(base)
            for u, v in inner:
                targets[pos[u]] += 1
            flips = _gray_flips(len(inner))
            while True:
                clock.tick()
                stats["orientations"] += 1
                key = (tuple(lengths), tuple(targets))
                if key not in dp_cache:
                    dp_cache[key] = dp_feasible(lengths, targets)
                ok, assign = dp_cache[key]
                if ok:
                    return finish(alpha_per_class, a_rest, base, state, assign, lengths)
                e = next(flips, None)
                if e is None:
                    return None
                u, v = inner[e]
                delta = -1 if state[e] else 1
                state[e] ^= 1
                targets[pos[u]] += delta
                targets[pos[v]] -= delta

        def rec(ci, chosen, used):
            if ci == len(classes):
                stats["alphas"] += 1
                return try_orientations(chosen, used)
            A = classes[ci]
            labels = space.labels[A]
            for alpha in _counts(len(space.classes[A]), len(labels)):
                clock.tick()
                new = list(used)
                for (b, _), cnt in zip(labels, alpha):
                    if cnt:
                        for i, bi in enumerate(b):
                            new[i] += bi * cnt
                if any(new[i] > spec.a[i] for i in range(len(new))):
                    continue
                found = rec(ci + 1, chosen + [alpha], new)
                if found is not None:
                    return found
            return None

        try:
            dec = rec(0, [], [0] * space.d_prime)
        except BudgetExceeded:
            return SolveReport.unknown(instance, "vcxp", **stats)
        if dec is None:
            return SolveReport.no(instance, "vcxp", reason="no labelling packs", **stats)
    return SolveReport.yes(instance, dec, "vcxp", **stats)
