"""Integer programs for the decomposition problem and a small feasibility engine.

Two formulations:

* whole graph - per vertex and length, how many stars sit there (x), and per
  edge, how many copies point from the lower to the higher endpoint (y);
* vertex cover C - x and y only on C; vertices outside C are counted by
  type (z[b,T]: out-neighbourhood T, star-count vector b).  The Hall-type
  family of constraints on z is exponential, so only its single-set rows
  are written up front; the rest arrive as cuts certified by a min-cut.

The engine is plain depth-first branch and bound over bounded integers with
interval propagation; no LP relaxation.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import (BudgetClock, BudgetExceeded, Graph, Instance, SearchBudget, SolveReport,
                   SolverDefect, StarDecomposition, size_mismatch, stars_from_assignment,
                   timed)
from .flows import find_sdr

EQ, LE = "=", "<="


@dataclass
class Row:
    coefs: dict[int, int]
    rel: str
    rhs: int
    name: str = ""


@dataclass
class IlpModel:
    names: list[str] = field(default_factory=list)
    lower: list[int] = field(default_factory=list)
    upper: list[int] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    branch_order: list[int] | None = None     # scan order for ties; default = declaration

    def add_var(self, name: str, lo: int, hi: int) -> int:
        if lo > hi:
            hi = lo - 1  # empty domain, model infeasible
        self.names.append(name)
        self.lower.append(int(lo))
        self.upper.append(int(hi))
        return len(self.names) - 1

    def add_row(self, coefs: dict[int, int], rel: str, rhs: int, name: str = "") -> int:
        if rel not in (EQ, LE):
            raise ValueError(f"unknown relation {rel!r}")
        for j, c in coefs.items():
            if not (0 <= j < len(self.names)):
                raise ValueError(f"row {name!r} references undeclared variable {j}")
            if c != int(c):
                raise ValueError("coefficients must be integers")
        self.rows.append(Row({j: int(c) for j, c in coefs.items() if c}, rel, int(rhs), name))
        return len(self.rows) - 1

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def satisfied_by(self, x: Sequence[int]) -> bool:
        if any(not (lo <= v <= hi) for v, lo, hi in zip(x, self.lower, self.upper)):
            return False
        for r in self.rows:
            act = sum(c * x[j] for j, c in r.coefs.items())
            if (r.rel == EQ and act != r.rhs) or (r.rel == LE and act > r.rhs):
                return False
        return True

    def to_lp(self) -> str:
        """CPLEX LP text (feasibility, zero objective) for cross-checking elsewhere."""

        def clean(name):
            return name.replace("[", "(").replace("]", ")").replace(" ", "")

        def term(c, j, first):
            sign = "-" if c < 0 else ("" if first else "+")
            mag = abs(c)
            return f"{sign} {'' if mag == 1 else str(mag) + ' '}{clean(self.names[j])}".strip()

        lines = ["\\ feasibility model", "Minimize", " obj: 0", "Subject To"]
        for i, r in enumerate(self.rows):
            body = " ".join(term(c, j, k == 0) for k, (j, c) in enumerate(sorted(r.coefs.items())))
            op = "=" if r.rel == EQ else "<="
            lines.append(f" {clean(r.name) or 'r' + str(i)}: {body or '0 x_dummy'} {op} {r.rhs}")
        lines.append("Bounds")
        for j, name in enumerate(self.names):
            lines.append(f" {self.lower[j]} <= {clean(name)} <= {self.upper[j]}")
        lines.append("General")
        lines.append(" " + " ".join(clean(n) for n in self.names))
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class Feasibility:
    status: str                      # "feasible" | "infeasible" | "unknown"
    assignment: list[int] | None = None
    nodes: int = 0

    def __bool__(self):
        return self.status == "feasible"


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class _Engine:
    def __init__(self, model: IlpModel):
        self.rows: list = []
        self.var_rows: list[list[int]] = [[] for _ in range(model.num_vars)]
        for r in model.rows:
            self.add(r)

    def add(self, r: Row):
        i = len(self.rows)
        self.rows.append((list(r.coefs), list(r.coefs.values()), r.rel == EQ, r.rhs))
        for j in r.coefs:
            self.var_rows[j].append(i)

    def propagate(self, lo, hi, queue) -> bool:
        rows, var_rows = self.rows, self.var_rows
        queued = set(queue)
        queue = list(queue)
        while queue:
            r = queue.pop()
            queued.discard(r)
            idx, cf, eq, rhs = rows[r]
            mn = mx = 0
            g = 0
            fixed = 0
            for j, c in zip(idx, cf):
                l, h = lo[j], hi[j]
                if c > 0:
                    mn += c * l
                    mx += c * h
                else:
                    mn += c * h
                    mx += c * l
                if l == h:
                    fixed += c * l
                else:
                    g = math.gcd(g, c)
            if mn > rhs or (eq and mx < rhs):
                return False
            if eq:
                if g == 0:
                    continue
                if (rhs - fixed) % g:
                    return False
            for j, c in zip(idx, cf):
                l, h = lo[j], hi[j]
                if l == h:
                    continue
                if c > 0:
                    nh = (rhs - mn + c * l) // c
                    nl = _ceil_div(rhs - mx + c * h, c) if eq else l
                else:
                    nl = _ceil_div(rhs - mn + c * h, c)
                    nh = (rhs - mx + c * l) // c if eq else h
                if nl > l or nh < h:
                    nl, nh = max(l, nl), min(h, nh)
                    if nl > nh:
                        return False
                    lo[j], hi[j] = nl, nh
                    for r2 in var_rows[j]:
                        if r2 not in queued:
                            queued.add(r2)
                            queue.append(r2)
        return True


def solve_feasibility(model: IlpModel, budget: SearchBudget | BudgetClock | None = None,
                      lazy: Callable[[list[int]], Row | None] | None = None) -> Feasibility:
    """Depth-first search: smallest open domain first, values ascending.

    ``lazy`` sees every complete assignment; returning a row rejects it.  The
    row must cut that assignment off, is appended to ``model``, and the search
    carries on from where it stands (rows only shrink the feasible set, so
    subtrees already refuted stay refuted).
    """
    clock = budget if isinstance(budget, BudgetClock) else BudgetClock(budget)
    start_nodes = clock.nodes
    eng = _Engine(model)
    lo, hi = list(model.lower), list(model.upper)
    if any(l > h for l, h in zip(lo, hi)):
        return Feasibility("infeasible")
    if not eng.propagate(lo, hi, range(len(eng.rows))):
        return Feasibility("infeasible", nodes=0)
    stack: list[list] = []       # [lo, hi, var, next value, rows seen by lo/hi]
    order = model.branch_order if model.branch_order is not None else range(len(lo))
    try:
        while True:
            best, bj = None, -1
            for j in order:
                w = hi[j] - lo[j]
                if w and (best is None or w < best):
                    best, bj = w, j
                    if w == 1:
                        break
            if bj >= 0:
                stack.append([lo, hi, bj, lo[bj], len(eng.rows)])
            else:
                if not model.satisfied_by(lo):
                    raise SolverDefect("propagation fixed an infeasible point")
                cut = lazy(lo) if lazy is not None else None
                if cut is None:
                    return Feasibility("feasible", lo, clock.nodes - start_nodes)
                act = sum(c * lo[j] for j, c in cut.coefs.items())
                if (act <= cut.rhs) if cut.rel == LE else (act == cut.rhs):
                    raise SolverDefect("lazy row does not cut off the assignment")
                model.add_row(cut.coefs, cut.rel, cut.rhs, cut.name)
                eng.add(model.rows[-1])
            while True:
                if not stack:
                    return Feasibility("infeasible", nodes=clock.nodes - start_nodes)
                frame = stack[-1]
                flo, fhi, j, v, seen = frame
                if v > fhi[j]:
                    stack.pop()
                    continue
                frame[3] = v + 1
                clock.tick()
                lo, hi = list(flo), list(fhi)
                lo[j] = hi[j] = v
                if eng.propagate(lo, hi, [*eng.var_rows[j], *range(seen, len(eng.rows))]):
                    break
    except BudgetExceeded:
        return Feasibility("unknown", nodes=clock.nodes - start_nodes)


# ------------------------------------------------------------------- whole-graph model

@dataclass
class Ilp1Context:
    graph: Graph
    s: tuple[int, ...]
    x: dict[tuple[int, int], int]    # (length index, vertex) -> var
    y: list[int]                     # per edge of graph.edges


def build_ilp1(instance: Instance) -> tuple[IlpModel, Ilp1Context]:
    g, spec = instance.graph, instance.spec
    if not g.edges:
        raise ValueError("graph has no edges; no valid spec exists")
    model = IlpModel()
    deg = g.degrees()
    x = {}
    for u in range(g.n):
        for i, (s_i, a_i) in enumerate(zip(spec.s, spec.a)):
            x[i, u] = model.add_var(f"x[{i},{u}]", 0, min(a_i, deg[u] // s_i))
    y = [model.add_var(f"y[{u},{v}]", 0, k) for (u, v), k in zip(g.edges, g.multiplicity)]
    for i, a_i in enumerate(spec.a):
        model.add_row({x[i, u]: 1 for u in range(g.n)}, EQ, a_i, f"count[{i}]")
    for u in range(g.n):
        coefs = {x[i, u]: s_i for i, s_i in enumerate(spec.s)}
        rhs = 0
        for e, ((p, q), k) in enumerate(zip(g.edges, g.multiplicity)):
            if p == u:
                coefs[y[e]] = -1
            elif q == u:
                coefs[y[e]] = 1
                rhs += k
        model.add_row(coefs, EQ, rhs, f"outdeg[{u}]")
    return model, Ilp1Context(g, spec.s, x, y)


def _extract_ilp1(ctx: Ilp1Context, sol: Sequence[int]) -> StarDecomposition:
    g = ctx.graph
    out: dict[int, list[int]] = {u: [] for u in range(g.n)}
    for e, ((u, v), k) in enumerate(zip(g.edges, g.multiplicity)):
        f = sol[ctx.y[e]]
        out[u].extend([v] * f)
        out[v].extend([u] * (k - f))
    lengths = {u: [] for u in range(g.n)}
    for (i, u), j in ctx.x.items():
        lengths[u].extend([ctx.s[i]] * sol[j])
    return StarDecomposition(tuple(stars_from_assignment(out, lengths)))


def solve_ilp1(instance: Instance, budget: SearchBudget | None = None) -> SolveReport:
    stats: dict = {}
    with timed(stats):
        early = size_mismatch(instance, "ilp1")
        if early is not None:
            return early
        model, ctx = build_ilp1(instance)
        res = solve_feasibility(model, budget)
        stats.update(nodes=res.nodes, variables=model.num_vars, rows=len(model.rows))
        if res.status == "unknown":
            return SolveReport.unknown(instance, "ilp1", **stats)
        if not res:
            return SolveReport.no(instance, "ilp1", reason="model infeasible", **stats)
        dec = extract_decomposition(res.assignment, ctx)
    return SolveReport.yes(instance, dec, "ilp1", **stats)


# --------------------------------------------------------------- vertex cover model

def min_vertex_cover(graph: Graph, cap: int = 12) -> list[int] | None:
    """Exact minimum vertex cover by bounded search, or None if larger than ``cap``."""
    adj = [set(nb) for nb in graph.neighbors()]

    def search(alive_edges_adj, k):
        v = max(range(graph.n), key=lambda x: (len(alive_edges_adj[x]), -x))
        if not alive_edges_adj[v]:
            return []
        if k == 0:
            return None
        # degree-one vertex: taking its neighbour is never worse
        for x in range(graph.n):
            if len(alive_edges_adj[x]) == 1:
                v = next(iter(alive_edges_adj[x]))
                break
        # branch: v in the cover, or all of N(v) in the cover
        for take in ([v], sorted(alive_edges_adj[v])):
            if len(take) > k:
                continue
            nxt = [set(s) for s in alive_edges_adj]
            for t in take:
                for w in nxt[t]:
                    nxt[w].discard(t)
                nxt[t] = set()
            rest = search(nxt, k - len(take))
            if rest is not None:
                return sorted(take + rest)
        return None

    for k in range(cap + 1):
        found = search(adj, k)
        if found is not None:
            return found
    return None


def compositions(lengths: Sequence[int], total: int, cap: int) -> list[tuple[int, ...]]:
    """All b in [0, cap]^len(lengths) with sum b_i * lengths_i == total, lexicographic."""
    out = []

    def rec(i, left, acc):
        if i == len(lengths):
            if left == 0:
                out.append(tuple(acc))
            return
        for b in range(min(cap, left // lengths[i]) + 1):
            acc.append(b)
            rec(i + 1, left - b * lengths[i], acc)
            acc.pop()

    rec(0, total, [])
    return out


@dataclass
class VcContext:
    graph: Graph
    spec_s: tuple[int, ...]
    cover: tuple[int, ...]
    rest: tuple[int, ...]                       # S = V - C, independent
    d_prime: int                                # number of lengths <= |C|
    d_u: dict[int, int]                         # edges from u in C into S
    N: dict[frozenset, tuple[int, ...]]         # T -> vertices of S adjacent to all of T
    B: dict[int, list[tuple[int, ...]]]         # t -> compositions of t
    x: dict[tuple[int, int], int] = field(default_factory=dict)
    y: dict[tuple[int, int], int] = field(default_factory=dict)
    z: dict[tuple[tuple[int, ...], frozenset], int] = field(default_factory=dict)
    cuts: list[tuple[frozenset, ...]] = field(default_factory=list)

    def z_T(self, sol: Sequence[int]) -> dict[frozenset, int]:
        out: dict[frozenset, int] = {}
        for (b, T), j in self.z.items():
            out[T] = out.get(T, 0) + sol[j]
        return out

    def z_vars_of(self, T: frozenset) -> list[int]:
        return [j for (b, T2), j in self.z.items() if T2 == T]


def build_ilp2(instance: Instance, cover: Sequence[int]) -> tuple[IlpModel, VcContext]:
    g, spec = instance.graph, instance.spec
    C = tuple(sorted(set(cover)))
    inC = set(C)
    if any(not (0 <= u < g.n) for u in C):
        raise ValueError("cover names a vertex outside the graph")
    for (u, v), k in zip(g.edges, g.multiplicity):
        if u not in inC and v not in inC:
            raise ValueError(f"not a vertex cover: edge ({u},{v}) uncovered")
        if k > 1 and not (u in inC and v in inC):
            raise ValueError(f"parallel edge ({u},{v}) must lie inside the cover")
    S = tuple(x for x in range(g.n) if x not in inC)
    vc = len(C)
    d_prime = sum(1 for s_i in spec.s if s_i <= vc)
    adj = g.neighbors()
    d_u = {u: sum(1 for w in adj[u] if w not in inC) for u in C}
    Ts: set[frozenset] = set()
    for v in S:
        nb = sorted(adj[v])
        for r in range(len(nb) + 1):
            Ts.update(frozenset(T) for T in itertools.combinations(nb, r))
    N = {T: tuple(v for v in S if T <= adj[v].keys()) for T in sorted(Ts, key=sorted)}
    N = dict(sorted(N.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))))
    short = spec.s[:d_prime]
    B = {t: compositions(short, t, vc) for t in range(vc + 1)}
    ctx = VcContext(g, spec.s, C, S, d_prime, d_u, N, B)
    model = IlpModel()
    deg = g.degrees()
    for u in C:
        for i, (s_i, a_i) in enumerate(zip(spec.s, spec.a)):
            ctx.x[i, u] = model.add_var(f"x[{i},{u}]", 0, min(a_i, deg[u] // s_i))
    for (u, v), k in zip(g.edges, g.multiplicity):
        if u in inC and v in inC:
            ctx.y[u, v] = model.add_var(f"y[{u},{v}]", 0, k)
    for T, members in N.items():
        for b in B[len(T)]:
            name = f"z[{','.join(map(str, b))};{','.join(map(str, sorted(T)))}]"
            ctx.z[b, T] = model.add_var(name, 0, len(members))
    model.add_row({j: 1 for j in ctx.z.values()}, EQ, len(S), "cover_S")
    for i, a_i in enumerate(spec.a):
        coefs = {ctx.x[i, u]: 1 for u in C}
        if i < d_prime:
            for (b, T), j in ctx.z.items():
                if b[i]:
                    coefs[j] = b[i]
        model.add_row(coefs, EQ, a_i, f"count[{i}]")
    for u in C:
        coefs = {ctx.x[i, u]: s_i for i, s_i in enumerate(spec.s)}
        rhs = d_u[u]
        for (p, q), j in ctx.y.items():
            if p == u:
                coefs[j] = -1
            elif q == u:
                coefs[j] = 1
                rhs += g.mult(p, q)
        for (b, T), j in ctx.z.items():
            if u in T:
                coefs[j] = 1
        model.add_row(coefs, EQ, rhs, f"outdeg[{u}]")
    for T, members in N.items():
        js = ctx.z_vars_of(T)
        if js:
            model.add_row({j: 1 for j in js}, LE, len(members), f"hall[{','.join(map(str, sorted(T)))}]")
    # types of independent vertices first: they shape everything else
    model.branch_order = [*ctx.z.values(), *ctx.y.values(), *ctx.x.values()]
    return model, ctx


def _split_leaves(vertex_leaves: Sequence[int], lengths: Sequence[int]) -> list[list[int]]:
    out, pos = [], 0
    for ell in lengths:
        out.append(list(vertex_leaves[pos:pos + ell]))
        pos += ell
    return out


def _extract_ilp2(ctx: VcContext, sol: Sequence[int], Z: dict[frozenset, frozenset]
                  ) -> StarDecomposition:
    g = ctx.graph
    adj = g.neighbors()
    inC = set(ctx.cover)
    out: dict[int, list[int]] = {x: [] for x in range(g.n)}
    lengths: dict[int, list[int]] = {x: [] for x in range(g.n)}
    for (u, v), j in ctx.y.items():
        k = g.mult(u, v)
        out[u].extend([v] * sol[j])
        out[v].extend([u] * (k - sol[j]))
    owner: dict[int, frozenset] = {}
    for T, members in Z.items():
        for v in members:
            owner[v] = T
    if sorted(owner) != list(ctx.rest):
        raise SolverDefect("representative sets do not partition the independent side")
    for v in ctx.rest:
        T = owner[v]
        for u in adj[v]:
            if u in T:
                out[v].append(u)
            else:
                out[u].append(v)
    for (i, u), j in ctx.x.items():
        lengths[u].extend([ctx.spec_s[i]] * sol[j])
    for T, members in Z.items():
        pool = sorted(members)
        for b in sorted(b for (b, T2) in ctx.z if T2 == T):
            cnt = sol[ctx.z[b, T]]
            for v in pool[:cnt]:
                for i, bi in enumerate(b):
                    lengths[v].extend([ctx.spec_s[i]] * bi)
            pool = pool[cnt:]
        if pool:
            raise SolverDefect("z counts do not exhaust a representative set")
    return StarDecomposition(tuple(stars_from_assignment(out, lengths)))


def extract_decomposition(assignment: Sequence[int], context, sdr=None) -> StarDecomposition:
    """Read a decomposition off a feasible assignment (and, for the cover model, its SDR)."""
    if isinstance(context, Ilp1Context):
        return _extract_ilp1(context, assignment)
    if sdr is None:
        raise ValueError("cover model extraction needs the representative sets")
    return _extract_ilp2(context, assignment, sdr)


def solve_ilp2(instance: Instance, cover: Sequence[int] | None = None,
               budget: SearchBudget | None = None, max_cover: int = 12) -> SolveReport:
    """Cover model with lazily separated Hall cuts; a minimum cover is computed if none given."""
    stats: dict = {}
    with timed(stats):
        early = size_mismatch(instance, "ilp2")
        if early is not None:
            return early
        if cover is None:
            cover = min_vertex_cover(instance.graph, max_cover)
            if cover is None:
                raise ValueError(f"no vertex cover of size <= {max_cover}")
        model, ctx = build_ilp2(instance, cover)
        stats.update(cover=list(ctx.cover), variables=model.num_vars)
        found: dict = {}
        res = solve_feasibility(model, budget, lazy=lambda sol: _hall_cut(ctx, sol, found))
        stats.update(nodes=res.nodes, cuts=len(ctx.cuts), rows=len(model.rows))
        if res.status == "unknown":
            return SolveReport.unknown(instance, "ilp2", **stats)
        if not res:
            return SolveReport.no(instance, "ilp2", reason="model infeasible", **stats)
        dec = extract_decomposition(res.assignment, ctx, found["Z"])
    return SolveReport.yes(instance, dec, "ilp2", **stats)


def _hall_cut(ctx: VcContext, sol: Sequence[int], found: dict) -> Row | None:
    """Separation: None if the z counts admit representatives (stored in ``found``)."""
    zT = ctx.z_T(sol)
    fam = [T for T in ctx.N if zT.get(T, 0) > 0]
    sdr = find_sdr([ctx.N[T] for T in fam], [zT[T] for T in fam])
    if sdr:
        found["Z"] = dict(zip(fam, sdr.sets))
        return None
    J = tuple(fam[j] for j in sdr.violating)
    union = set().union(*(ctx.N[T] for T in J))
    ctx.cuts.append(J)
    return Row({j: 1 for T in J for j in ctx.z_vars_of(T)}, LE, len(union),
               f"hall_cut[{len(ctx.cuts) - 1}]")


def solve_ilp2_model(instance: Instance, cover: Sequence[int],
                     budget: SearchBudget | None = None):
    """Run the cover model; returns (model with cuts, context, assignment or None)."""
    model, ctx = build_ilp2(instance, cover)
    res = solve_feasibility(model, budget, lazy=lambda sol: _hall_cut(ctx, sol, {}))
    return model, ctx, res.assignment
