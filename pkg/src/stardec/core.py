"""Data model shared by every solver: graphs, star specs, decompositions, reports.

Vertices are dense integers ``0..n-1``.  Multigraphs carry one entry per
vertex pair plus a multiplicity, never repeated pairs.  A star is a center
and a leaf multiset; in a multigraph a leaf may repeat up to the multiplicity
of the edge joining it to the center.
"""
from __future__ import annotations

import enum
import json
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence


class MalformedInputError(ValueError):
    """Structurally invalid input (bad vertex id, bad field, bad JSON)."""


class SolverDefect(AssertionError):
    """An internal guarantee was broken; always a bug, never an answer."""


class WrongCase(ValueError):
    """A special-case solver was called outside its precondition."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    multiplicity: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise MalformedInputError(f"vertex count must be >= 0, got {self.n}")
        mult = self.multiplicity
        if mult is None:
            mult = (1,) * len(self.edges)
        if len(mult) != len(self.edges):
            raise MalformedInputError("multiplicity must be parallel to edges")
        merged: dict[tuple[int, int], int] = {}
        for (u, v), k in zip(self.edges, mult):
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise MalformedInputError(f"edge ({u},{v}) has endpoint outside [0,{self.n})")
            if u == v:
                raise MalformedInputError(f"self-loop at vertex {u}")
            if int(k) < 1:
                raise MalformedInputError(f"edge ({u},{v}) has multiplicity {k} < 1")
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, 0) + int(k)
        keys = sorted(merged)
        object.__setattr__(self, "edges", tuple(keys))
        object.__setattr__(self, "multiplicity", tuple(merged[e] for e in keys))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(keys)})

    @property
    def size(self) -> int:
        """Edge count with multiplicity."""
        return sum(self.multiplicity)

    @property
    def is_simple(self) -> bool:
        return all(k == 1 for k in self.multiplicity)

    def mult(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        i = self._index.get(key)
        return 0 if i is None else self.multiplicity[i]

    def edge_id(self, u: int, v: int) -> int | None:
        return self._index.get((u, v) if u < v else (v, u))

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (u, v), k in zip(self.edges, self.multiplicity):
            deg[u] += k
            deg[v] += k
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighbors(self) -> list[dict[int, int]]:
        """Per-vertex map neighbor -> multiplicity."""
        adj: list[dict[int, int]] = [{} for _ in range(self.n)]
        for (u, v), k in zip(self.edges, self.multiplicity):
            adj[u][v] = k
            adj[v][u] = k
        return adj

    def edge_list(self) -> list[tuple[int, int, int]]:
        return [(u, v, k) for (u, v), k in zip(self.edges, self.multiplicity)]

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", list[int]]:
        """Subgraph on ``vertices`` relabelled ``0..k-1`` in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges, mult = [], []
        for (u, v), k in zip(self.edges, self.multiplicity):
            if u in pos and v in pos:
                edges.append((pos[u], pos[v]))
                mult.append(k)
        return Graph(len(vertices), tuple(edges), tuple(mult)), list(vertices)

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges), self.multiplicity)


@dataclass(frozen=True)
class StarSpec:
    s: tuple[int, ...]
    a: tuple[int, ...]

    def __post_init__(self):
        s, a = tuple(int(x) for x in self.s), tuple(int(x) for x in self.a)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "a", a)
        if len(s) != len(a) or not s:
            raise MalformedInputError("s and a must be nonempty and of equal length")
        if any(x < 1 for x in s):
            raise MalformedInputError("star lengths must be positive")
        if any(x < 1 for x in a):
            raise MalformedInputError("multiplicities must be positive")
        if any(x >= y for x, y in zip(s, s[1:])):
            raise MalformedInputError("s must be strictly increasing; use StarSpec.normalized")

    @classmethod
    def normalized(cls, s: Iterable[int], a: Iterable[int]) -> tuple["StarSpec", bool]:
        """Merge duplicate lengths and sort.  Returns (spec, changed)."""
        s, a = list(s), list(a)
        if len(s) != len(a):
            raise MalformedInputError("s and a must have equal length")
        counts: Counter = Counter()
        for x, k in zip(s, a):
            counts[int(x)] += int(k)
        keys = sorted(counts)
        spec = cls(tuple(keys), tuple(counts[x] for x in keys))
        return spec, (spec.s, spec.a) != (tuple(s), tuple(a))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "StarSpec":
        counts = Counter(int(x) for x in lengths)
        keys = sorted(counts)
        return cls(tuple(keys), tuple(counts[x] for x in keys))

    @property
    def d(self) -> int:
        return len(self.s)

    @property
    def total(self) -> int:
        return sum(x * k for x, k in zip(self.s, self.a))

    @property
    def max_length(self) -> int:
        return self.s[-1]

    def lengths(self) -> list[int]:
        """The star multiset, longest first."""
        out = []
        for x, k in zip(reversed(self.s), reversed(self.a)):
            out.extend([x] * k)
        return out

    def histogram(self) -> Counter:
        return Counter(dict(zip(self.s, self.a)))


@dataclass(frozen=True)
class Instance:
    graph: Graph
    spec: StarSpec
    labels: tuple[str, ...] | None = None
    warnings: tuple[str, ...] = ()

    @property
    def size_ok(self) -> bool:
        return self.spec.total == self.graph.size


@dataclass(frozen=True, order=True)
class Star:
    center: int
    leaves: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))

    @property
    def length(self) -> int:
        return len(self.leaves)

    def canonical(self) -> "Star":
        # a single edge is the same subgraph whichever endpoint is called center
        if len(self.leaves) == 1 and self.leaves[0] < self.center:
            return Star(self.leaves[0], (self.center,))
        return self


@dataclass(frozen=True)
class StarDecomposition:
    stars: tuple[Star, ...]

    def __post_init__(self):
        object.__setattr__(self, "stars", tuple(
            s if isinstance(s, Star) else Star(s[0], tuple(s[1])) for s in self.stars))

    def canonical(self) -> "StarDecomposition":
        return StarDecomposition(tuple(sorted(s.canonical() for s in self.stars)))

    def centers(self) -> set[int]:
        return {s.center for s in self.stars}

    def __len__(self):
        return len(self.stars)


def stars_from_assignment(out_leaves: dict[int, list[int]],
                          lengths_at: dict[int, list[int]]) -> list[Star]:
    """Cut each vertex's out-neighbour multiset into stars of the given lengths."""
    stars = []
    for v, lengths in lengths_at.items():
        leaves = sorted(out_leaves.get(v, []))
        if sum(lengths) != len(leaves):
            raise SolverDefect(f"vertex {v}: star lengths {lengths} vs out-degree {len(leaves)}")
        pos = 0
        for ell in sorted(lengths, reverse=True):
            stars.append(Star(v, tuple(leaves[pos:pos + ell])))
            pos += ell
    return stars


def explain(instance: Instance, dec: StarDecomposition) -> str | None:
    """First violated decomposition invariant, or None if ``dec`` is valid.

    Raises MalformedInputError if a star names a vertex outside the graph.
    """
    g = instance.graph
    index = g._index
    cover = [0] * len(g.edges)
    for st in dec.stars:
        c = st.center
        if not (0 <= c < g.n) or (st.leaves and not (0 <= min(st.leaves) <= max(st.leaves) < g.n)):
            bad = next(x for x in (c, *st.leaves) if not (0 <= x < g.n))
            raise MalformedInputError(f"vertex {bad} outside [0,{g.n})")
        for leaf in st.leaves:
            e = index.get((c, leaf) if c < leaf else (leaf, c))
            if e is None:
                return f"star at {c} uses non-edge ({c},{leaf})"
            cover[e] += 1
    for (u, v), k, got in zip(g.edges, g.multiplicity, cover):
        if got != k:
            return f"edge ({u},{v}) covered {got} times"
    if Counter(st.length for st in dec.stars) != instance.spec.histogram():
        return "length histogram mismatch"
    return None


def verify(instance: Instance, dec: StarDecomposition) -> bool:
    return explain(instance, dec) is None


@dataclass
class SearchBudget:
    """Node and wall-clock limits; exceeding either yields UNKNOWN."""
    max_nodes: int | None = None
    max_millis: float | None = None

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")
        if self.max_millis is not None and self.max_millis <= 0:
            raise ValueError("max_millis must be positive")

    def start(self) -> "BudgetClock":
        return BudgetClock(self)


class BudgetExceeded(Exception):
    pass


class BudgetClock:
    def __init__(self, budget: SearchBudget | None):
        self.max_nodes = budget.max_nodes if budget else None
        self.deadline = None
        if budget and budget.max_millis is not None:
            self.deadline = time.perf_counter() + budget.max_millis / 1000.0
        self.nodes = 0

    def tick(self, k: int = 1):
        self.nodes += k
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded
        if self.deadline is not None and (self.nodes & 255) == 0 \
                and time.perf_counter() > self.deadline:
            raise BudgetExceeded


class Answer(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolveReport:
    answer: Answer
    algorithm: str
    witness: StarDecomposition | None = None
    reason: str | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        self.answer = Answer(self.answer)
        if self.answer is Answer.YES and self.witness is None:
            raise SolverDefect("YES report without a witness")

    @classmethod
    def yes(cls, instance: Instance, witness: StarDecomposition, algorithm: str,
            **stats) -> "SolveReport":
        problem = explain(instance, witness)
        if problem is not None:
            raise SolverDefect(f"{algorithm} produced an invalid witness: {problem}")
        return cls(Answer.YES, algorithm, witness, stats=stats, labels=instance.labels)

    @classmethod
    def no(cls, instance: Instance, algorithm: str, reason: str | None = None,
           **stats) -> "SolveReport":
        return cls(Answer.NO, algorithm, reason=reason, stats=stats, labels=instance.labels)

    @classmethod
    def unknown(cls, instance: Instance, algorithm: str, reason: str = "budget exhausted",
                **stats) -> "SolveReport":
        return cls(Answer.UNKNOWN, algorithm, reason=reason, stats=stats,
                   labels=instance.labels)


def size_mismatch(instance: Instance, algorithm: str) -> SolveReport | None:
    """Immediate NO when the star lengths cannot add up to the edge count."""
    if instance.size_ok:
        return None
    return SolveReport.no(instance, algorithm, reason="size mismatch",
                          total_length=instance.spec.total, edges=instance.graph.size)


# ---------------------------------------------------------------- serialization

def _field(obj: dict, key: str, kind, where: str = "instance"):
    if key not in obj:
        raise MalformedInputError(f"{where}: missing field '{key}'")
    val = obj[key]
    if kind is list and not isinstance(val, list):
        raise MalformedInputError(f"{where}: field '{key}' must be a list")
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise MalformedInputError(f"{where}: field '{key}' must be an integer")
    return val


def _parse_json(data: bytes | str, what: str) -> Any:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(
            f"{what}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def _int_list(vals, where: str) -> list[int]:
    for i, x in enumerate(vals):
        if not isinstance(x, int) or isinstance(x, bool):
            raise MalformedInputError(f"{where}[{i}] must be an integer, got {x!r}")
    return list(vals)


def instance_from_dict(obj: dict) -> Instance:
    if not isinstance(obj, dict):
        raise MalformedInputError("instance: top level must be an object")
    n = _field(obj, "n", int)
    raw_edges = _field(obj, "edges", list)
    edges = []
    for i, e in enumerate(raw_edges):
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedInputError(f"instance: edges[{i}] must be a pair [u,v]")
        edges.append(tuple(_int_list(e, f"instance: edges[{i}]")))
    mult = obj.get("multiplicity")
    if mult is not None:
        if not isinstance(mult, list):
            raise MalformedInputError("instance: field 'multiplicity' must be a list")
        mult = tuple(_int_list(mult, "instance: multiplicity"))
    s = _int_list(_field(obj, "s", list), "instance: s")
    a = _int_list(_field(obj, "a", list), "instance: a")
    graph = Graph(n, tuple(edges), mult)
    spec, changed = StarSpec.normalized(s, a)
    warnings = ("s normalized",) if changed else ()
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise MalformedInputError("instance: 'labels' must list one label per vertex")
        labels = tuple(str(x) for x in labels)
    return Instance(graph, spec, labels, warnings)


def load_instance(data: bytes | str) -> Instance:
    return instance_from_dict(_parse_json(data, "instance"))


def instance_to_dict(instance: Instance) -> dict:
    g = instance.graph
    out: dict[str, Any] = {
        "n": g.n,
        "edges": [list(e) for e in g.edges],
        "s": list(instance.spec.s),
        "a": list(instance.spec.a),
    }
    if not g.is_simple:
        out["multiplicity"] = list(g.multiplicity)
    if instance.labels is not None:
        out["labels"] = list(instance.labels)
    return out


def _canonical_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def dump_instance(instance: Instance) -> bytes:
    return _canonical_bytes(instance_to_dict(instance))


def load_edge_list(text: str, s: Sequence[int], a: Sequence[int]) -> Instance:
    """Whitespace separated ``u v`` lines; labels are mapped to ids in order of appearance.

    Blank lines and lines starting with ``#`` are ignored.  Repeated pairs
    become multiplicities.
    """
    ids: dict[str, int] = {}
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedInputError(f"edge list line {lineno}: expected 'u v', got {line!r}")
        for p in parts:
            ids.setdefault(p, len(ids))
        edges.append((ids[parts[0]], ids[parts[1]]))
    spec, changed = StarSpec.normalized(s, a)
    labels = tuple(ids)
    identity = all(lab == str(i) for i, lab in enumerate(labels))
    return Instance(Graph(len(ids), tuple(edges)), spec, None if identity else labels,
                    ("s normalized",) if changed else ())


def decomposition_to_dict(dec: StarDecomposition) -> dict:
    return {"stars": [{"center": st.center, "leaves": list(st.leaves)} for st in dec.stars]}


def decomposition_from_dict(obj: dict) -> StarDecomposition:
    if not isinstance(obj, dict):
        raise MalformedInputError("decomposition: top level must be an object")
    stars = []
    for i, st in enumerate(_field(obj, "stars", list, "decomposition")):
        where = f"decomposition: stars[{i}]"
        if not isinstance(st, dict):
            raise MalformedInputError(f"{where} must be an object")
        center = _field(st, "center", int, where)
        leaves = _int_list(_field(st, "leaves", list, where), f"{where}.leaves")
        stars.append(Star(center, tuple(leaves)))
    return StarDecomposition(tuple(stars))


def load_decomposition(data: bytes | str) -> StarDecomposition:
    return decomposition_from_dict(_parse_json(data, "decomposition"))


def dump_decomposition(dec: StarDecomposition) -> bytes:
    return _canonical_bytes(decomposition_to_dict(dec))


def report_to_dict(report: SolveReport, include_timing: bool = True) -> dict:
    stats = dict(report.stats)
    if not include_timing:
        stats.pop("wall_ms", None)
    out: dict[str, Any] = {
        "answer": report.answer.value,
        "algorithm": report.algorithm,
        "stats": stats,
    }
    if report.witness is not None:
        out["witness"] = decomposition_to_dict(report.witness)
    if report.reason is not None:
        out["reason"] = report.reason
    if report.labels is not None:
        out["labels"] = list(report.labels)
    return out


def dump_report(report: SolveReport, include_timing: bool = True) -> bytes:
    return _canonical_bytes(report_to_dict(report, include_timing))


def load_report(data: bytes | str) -> SolveReport:
    obj = _parse_json(data, "report")
    witness = obj.get("witness")
    labels = obj.get("labels")
    return SolveReport(
        Answer(_field(obj, "answer", str, "report")),
        _field(obj, "algorithm", str, "report"),
        decomposition_from_dict(witness) if witness is not None else None,
        reason=obj.get("reason"),
        stats=obj.get("stats", {}),
        labels=tuple(labels) if labels is not None else None,
    )


class timed:
    """Context manager recording wall time in milliseconds into a stats dict."""

    def __init__(self, stats: dict):
        self.stats = stats

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.stats

    def __exit__(self, *exc):
        self.stats["wall_ms"] = round((time.perf_counter() - self.t0) * 1000.0, 3)
        return False
