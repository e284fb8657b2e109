"""Solving through the neighbourhood-diversity (type) partition.

Large type classes are grouped into blocks that are complete graphs or
contain a spanning complete bipartite graph, hence have edge expansion at
least max(s).  Each block is contracted to one vertex carrying its internal
edges as pendant edges; the contracted multigraph has a small vertex cover
(small classes plus block vertices) and goes to the cover ILP.  Stars at a
block vertex are then realised inside the block by the expander construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .core import (Answer, Graph, Instance, SearchBudget, SolveReport, SolverDefect, Star,
                   StarDecomposition, StarSpec, explain, size_mismatch, timed)
from .expansion import expander_solve, expansion_lower_bound
from .ilp import solve_ilp1, solve_ilp2


@dataclass
class NdDecomposition:
    classes: list[tuple[int, ...]]
    kinds: list[str]                      # "clique" | "independent" | "single"
    complete: set[tuple[int, int]]        # class index pairs i < j joined completely
    class_of: list[int]

    @property
    def nd(self) -> int:
        return len(self.classes)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def nd_decompose(graph: Graph) -> NdDecomposition:
    """Coarsest partition into classes of vertices with equal neighbourhoods (up to each other)."""
    if not graph.is_simple:
        raise ValueError("type partition needs a simple graph")
    adj = [set(nb) for nb in graph.neighbors()]
    n = graph.n
    rep: list[int] = []
    class_of = [-1] * n
    members: list[list[int]] = []
    for v in range(n):
        for k, r in enumerate(rep):
            if adj[v] - {r} == adj[r] - {v}:
                class_of[v] = k
                members[k].append(v)
                break
        else:
            class_of[v] = len(rep)
            rep.append(v)
            members.append([v])
    order = sorted(range(len(members)), key=lambda k: (-len(members[k]), members[k][0]))
    remap = {old: new for new, old in enumerate(order)}
    classes = [tuple(members[k]) for k in order]
    class_of = [remap[c] for c in class_of]
    kinds = []
    for c in classes:
        if len(c) == 1:
            kinds.append("single")
        else:
            kinds.append("clique" if c[1] in adj[c[0]] else "independent")
    complete = set()
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if classes[j][0] in adj[classes[i][0]]:
                complete.add((i, j))
    return NdDecomposition(classes, kinds, complete, class_of)


@dataclass
class Block:
    vertices: tuple[int, ...]
    shape: str                                          # "complete" | "bipartite"
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None = None


@dataclass
class GroupingPlan:
    threshold: int
    small: tuple[int, ...]            # vertices of classes below the threshold
    stable: tuple[int, ...]           # B_0
    blocks: list[Block] = field(default_factory=list)


def build_grouping(nd: NdDecomposition, threshold: int) -> GroupingPlan:
    if threshold < 1:
        raise ValueError("threshold must be positive")
    big = [i for i, c in enumerate(nd.classes) if len(c) >= threshold]
    small = tuple(sorted(v for i, c in enumerate(nd.classes) if len(c) < threshold for v in c))
    bigset = set(big)
    hat = {i: sorted(j for j in big if j != i and (min(i, j), max(i, j)) in nd.complete)
           for i in big}
    stable: list[int] = []
    blocks: list[Block] = []
    seen: set[int] = set()
    for root in big:
        if root in seen:
            continue
        parent = {root: None}
        depth = {root: 0}
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in hat[i]:
                if j not in parent:
                    parent[j] = i
                    depth[j] = depth[i] + 1
                    queue.append(j)
        seen.update(parent)
        if len(parent) == 1:
            if nd.kinds[root] == "clique":
                blocks.append(Block(tuple(sorted(nd.classes[root])), "complete"))
            else:
                stable.extend(nd.classes[root])
            continue
        alive = set(parent)
        first_block = len(blocks)
        while alive:
            children = {i: [j for j in alive if parent[j] == i] for i in alive}
            cands = [i for i in alive if children[i]
                     and all(not children[j] for j in children[i])]
            v = min(cands, key=lambda i: (-depth[i], i))
            X = tuple(sorted(nd.classes[v]))
            Y = tuple(sorted(x for j in children[v] for x in nd.classes[j]))
            blocks.append(Block(tuple(sorted(X + Y)), "bipartite", (X, Y)))
            alive -= {v, *children[v]}
            if alive == {root}:
                last = blocks[-1]
                if parent[v] != root:
                    raise SolverDefect("root absorbed into a block it is not complete to")
                Y = tuple(sorted(last.bipartition[1] + nd.classes[root]))
                blocks[-1] = Block(tuple(sorted(last.vertices + nd.classes[root])),
                                   "bipartite", (last.bipartition[0], Y))
                alive.clear()
        if len(blocks) == first_block:
            raise SolverDefect("nontrivial component produced no block")
    plan = GroupingPlan(threshold, small, tuple(sorted(stable)), blocks)
    _check_plan(nd, plan, bigset)
    return plan


def _check_plan(nd: NdDecomposition, plan: GroupingPlan, big: set[int]):
    in_block = {v for b in plan.blocks for v in b.vertices}
    for v in plan.stable:
        cv = nd.class_of[v]
        for b in plan.blocks:
            cb = {nd.class_of[x] for x in b.vertices}
            if any((min(cv, c), max(cv, c)) in nd.complete for c in cb):
                raise SolverDefect("stable part touches a block")
    covered = sorted([*plan.small, *plan.stable, *in_block])
    if covered != sorted(v for c in nd.classes for v in c):
        raise SolverDefect("grouping does not partition the vertex set")


@dataclass
class ContractedInstance:
    graph: Graph
    cover: tuple[int, ...]
    block_vertex: list[int]                       # block index -> contracted vertex
    kept: dict[int, int]                          # original vertex -> contracted vertex
    pools: dict[tuple[int, int], list[tuple[int, int]]]   # contracted pair -> original edges
    pendant_owner: dict[int, int]                 # pendant vertex -> block index
    internal: list[list[tuple[int, int]]]         # block index -> internal original edges


def contract(graph: Graph, plan: GroupingPlan) -> ContractedInstance:
    kept_list = sorted([*plan.small, *plan.stable])
    kept = {v: i for i, v in enumerate(kept_list)}
    block_of = {v: k for k, b in enumerate(plan.blocks) for v in b.vertices}
    block_vertex = [len(kept_list) + k for k in range(len(plan.blocks))]
    nxt = len(kept_list) + len(plan.blocks)

    def image(v):
        return kept[v] if v in kept else block_vertex[block_of[v]]

    pools: dict[tuple[int, int], list[tuple[int, int]]] = {}
    internal: list[list[tuple[int, int]]] = [[] for _ in plan.blocks]
    edges: list[tuple[int, int]] = []
    for u, v in graph.edges:
        if u in block_of and v in block_of and block_of[u] == block_of[v]:
            internal[block_of[u]].append((u, v))
            continue
        p, q = image(u), image(v)
        key = (min(p, q), max(p, q))
        pools.setdefault(key, []).append((u, v))
        edges.append(key)
    pendant_owner = {}
    for k, inner in enumerate(internal):
        for _ in inner:
            pendant_owner[nxt] = k
            edges.append((block_vertex[k], nxt))
            nxt += 1
    g2 = Graph(nxt, edges)
    if g2.size != graph.size:
        raise SolverDefect("contraction changed the number of edges")
    cover = tuple(sorted([kept[v] for v in plan.small] + block_vertex))
    return ContractedInstance(g2, cover, block_vertex, kept, pools, pendant_owner, internal)


def _lift(instance: Instance, plan: GroupingPlan, ci: ContractedInstance,
          witness: StarDecomposition) -> tuple[list[Star], int]:
    back = {c: v for v, c in ci.kept.items()}
    bidx = {c: k for k, c in enumerate(ci.block_vertex)}
    pools = {key: list(edges) for key, edges in ci.pools.items()}

    def take(p, q):
        """Pop an original edge realising contracted pair (p, q); return (end at p, end at q)."""
        key = (min(p, q), max(p, q))
        u, v = pools[key].pop(0)
        in_p = (back.get(p) == u) if p in back else (u in plan.blocks[bidx[p]].vertices)
        return (u, v) if in_p else (v, u)

    stars: list[Star] = []
    block_lengths: list[list[int]] = [[] for _ in plan.blocks]
    block_out: list[list[tuple[int, int]]] = [[] for _ in plan.blocks]
    for st in witness.stars:
        c = st.center
        if c in back:
            leaves = [take(c, y)[1] for y in st.leaves]
            stars.append(Star(back[c], tuple(leaves)))
        elif c in bidx:
            k = bidx[c]
            block_lengths[k].append(st.length)
            for y in st.leaves:
                if y not in ci.pendant_owner:
                    block_out[k].append(take(c, y))
        else:                                   # pendant centre: a single internal edge
            block_lengths[ci.pendant_owner[c]].append(st.length)
    for key, rest in pools.items():
        if rest:
            raise SolverDefect("contracted edge copies left unassigned")
    for k, block in enumerate(plan.blocks):
        local_vertices = list(block.vertices)
        externals = sorted({y for _, y in block_out[k]})
        verts = local_vertices + externals
        pos = {v: i for i, v in enumerate(verts)}
        edges = [(pos[u], pos[v]) for u, v in ci.internal[k]]
        edges += [(pos[w], pos[y]) for w, y in block_out[k]]
        sub = Instance(Graph(len(verts), edges), StarSpec.from_lengths(block_lengths[k]))
        hint = None
        if block.bipartition is not None:
            hint = tuple([pos[v] for v in part] for part in block.bipartition)
        inner, _ = Graph(len(verts), edges).induced(range(len(local_vertices)))
        bound = expansion_lower_bound(inner, hint)
        if bound is None or bound < sub.spec.max_length:
            raise SolverDefect(f"block {k} fails the expansion precondition")
        rep = expander_solve(sub, [pos[y] for y in externals], hint)
        for st in rep.witness.stars:
            stars.append(Star(verts[st.center], tuple(verts[y] for y in st.leaves)))
    return stars, len(plan.blocks)


def ndfpt_solve(instance: Instance, threshold: int | None = None,
                budget: SearchBudget | None = None) -> SolveReport:
    """Contract large type classes, solve the cover ILP, lift through the blocks."""
    spec = instance.spec
    theta = 4 * spec.max_length if threshold is None else threshold
    if theta < 4 * spec.max_length:
        raise ValueError(f"threshold {theta} below 4 * max length = {4 * spec.max_length}")
    stats: dict = {"threshold": theta}
    with timed(stats):
        early = size_mismatch(instance, "ndfpt")
        if early is not None:
            return early
        nd = nd_decompose(instance.graph)
        stats["nd"] = nd.nd
        plan = build_grouping(nd, theta) if max(nd.sizes(), default=0) >= theta else None
        if plan is None or not plan.blocks:
            # nothing to contract: G itself is the contracted instance
            rep = solve_ilp1(instance, budget)
            rep.stats.update(fallback="ilp1", **stats)
            return rep
        ci = contract(instance.graph, plan)
        stats.update(blocks=len(plan.blocks), cover_size=len(ci.cover))
        sub = Instance(ci.graph, spec)
        rep = solve_ilp2(sub, ci.cover, budget)
        stats["contracted"] = {k: v for k, v in rep.stats.items() if k != "wall_ms"}
        if rep.answer is Answer.UNKNOWN:
            return SolveReport.unknown(instance, "ndfpt", **stats)
        if rep.answer is Answer.NO:
            return SolveReport.no(instance, "ndfpt", reason="contracted instance is NO", **stats)
        stars, _ = _lift(instance, plan, ci, rep.witness)
        dec = StarDecomposition(tuple(stars))
        why = explain(instance, dec)
        if why is not None:
            raise SolverDefect(f"lifted witness invalid: {why}")
    return SolveReport.yes(instance, dec, "ndfpt", **stats)
