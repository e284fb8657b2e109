"""Command line: solve, verify, generate, expansion.

Exit codes for ``solve``: 0 YES, 1 NO, 2 UNKNOWN, 3 bad input, 4 internal defect.
``verify`` exits 0 when the decomposition is valid and 1 otherwise.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .core import (Answer, Graph, Instance, MalformedInputError, SearchBudget, SolveReport,
                   SolverDefect, _canonical_bytes, explain, instance_to_dict,
                   load_decomposition, load_edge_list, load_instance, report_to_dict,
                   size_mismatch)

log = logging.getLogger("stardec")

ALGORITHMS = ("auto", "oracle", "poly", "tarsi", "ilp1", "ilp2", "vcxp", "ndfpt")
EXIT = {Answer.YES: 0, Answer.NO: 1, Answer.UNKNOWN: 2}
EXIT_INPUT, EXIT_DEFECT = 3, 4


def _budget(max_nodes, budget_ms, deadline=None) -> SearchBudget | None:
    ms = budget_ms
    if deadline is not None:
        ms = max(1.0, (deadline - time.perf_counter()) * 1000.0)
    if max_nodes is None and ms is None:
        return None
    return SearchBudget(max_nodes, ms)


def solve_auto(instance: Instance, max_nodes=None, budget_ms=None) -> SolveReport:
    """Size check, polynomial cases, certified expander, cover ILP, whole-graph ILP, oracle."""
    from .expansion import PreconditionUnverified, certified_expansion, expander_solve
    from .ilp import min_vertex_cover, solve_ilp1, solve_ilp2
    from .oracle import oracle_solve
    from .polycases import solve_cubic_k13, solve_s_le_2

    early = size_mismatch(instance, "auto")
    if early is not None:
        return early
    g, spec = instance.graph, instance.spec
    if spec.max_length <= 2:
        log.info("auto: all lengths <= 2")
        return solve_s_le_2(instance)
    if spec.s == (3,) and g.max_degree() <= 3:
        log.info("auto: cubic case")
        return solve_cubic_k13(instance)
    deadline = time.perf_counter() + budget_ms / 1000.0 if budget_ms else None
    phi = certified_expansion(g, spec.max_length, cap=16)
    if phi is not None and phi >= spec.max_length:
        try:
            log.info("auto: expansion %s certifies the expander route", phi)
            return expander_solve(instance, cap=16)
        except PreconditionUnverified:
            pass
    tried = []
    cover = min_vertex_cover(g, 12)
    if cover is not None:
        inC = set(cover)
        if all(k == 1 or (u in inC and v in inC) for (u, v), k in zip(g.edges, g.multiplicity)):
            log.info("auto: cover ILP with |C| = %d", len(cover))
            rep = solve_ilp2(instance, cover, _budget(max_nodes, budget_ms, deadline))
            if rep.answer is not Answer.UNKNOWN:
                return rep
            tried.append("ilp2")
    log.info("auto: whole-graph ILP")
    rep = solve_ilp1(instance, _budget(max_nodes, budget_ms, deadline))
    if rep.answer is not Answer.UNKNOWN:
        return rep
    tried.append("ilp1")
    log.info("auto: exhaustive search")
    rep = oracle_solve(instance, _budget(max_nodes, budget_ms, deadline))
    if rep.answer is Answer.UNKNOWN:
        rep.stats["tried"] = tried + ["oracle"]
    return rep


def run_algorithm(instance: Instance, algorithm: str, max_nodes=None, budget_ms=None,
                  threshold=None, cover=None) -> SolveReport:
    budget = _budget(max_nodes, budget_ms)
    if algorithm == "auto":
        return solve_auto(instance, max_nodes, budget_ms)
    if algorithm == "oracle":
        from .oracle import oracle_solve
        return oracle_solve(instance, budget)
    if algorithm == "poly":
        from .core import WrongCase
        from .polycases import solve_cubic_k13, solve_s_le_2
        early = size_mismatch(instance, "poly")
        if early is not None:
            return early
        if instance.spec.max_length <= 2:
            return solve_s_le_2(instance)
        if instance.spec.s == (3,):
            return solve_cubic_k13(instance)
        raise WrongCase("poly handles lengths <= 2, or s = (3) on max degree 3")
    if algorithm == "tarsi":
        from .expansion import expander_solve
        return expander_solve(instance, stable_set=cover or ())
    if algorithm == "ilp1":
        from .ilp import solve_ilp1
        return solve_ilp1(instance, budget)
    if algorithm == "ilp2":
        from .ilp import solve_ilp2
        return solve_ilp2(instance, cover, budget)
    if algorithm == "vcxp":
        from .vcxp import vcxp_solve
        return vcxp_solve(instance, cover, budget)
    if algorithm == "ndfpt":
        from .ndfpt import ndfpt_solve
        return ndfpt_solve(instance, threshold, budget)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _read_instance(path: str, s=None, a=None) -> Instance:
    data = sys.stdin.read() if path == "-" else Path(path).read_text()
    if s is not None:
        return load_edge_list(data, s, a)
    return load_instance(data)


def _read_cover(path: str | None) -> list[int] | None:
    if path is None:
        return None
    text = Path(path).read_text().strip()
    try:
        vals = json.loads(text)
    except json.JSONDecodeError:
        vals = text.split()
    try:
        return [int(v) for v in vals]
    except (TypeError, ValueError):
        raise MalformedInputError(f"cover file {path}: expected a list of vertex ids") from None


def _int_csv(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _solve_one(job) -> tuple[int, dict]:
    path, opts = job
    try:
        inst = _read_instance(path, opts["s"], opts["a"])
        for w in inst.warnings:
            log.warning("%s: %s", path, w)
        rep = run_algorithm(inst, opts["algorithm"], opts["max_nodes"], opts["budget_ms"],
                            opts["threshold"], opts["cover"])
        return EXIT[rep.answer], report_to_dict(rep)
    except SolverDefect as exc:
        return EXIT_DEFECT, {"error": f"internal defect: {exc}"}
    except (MalformedInputError, ValueError, OSError) as exc:
        return EXIT_INPUT, {"error": str(exc)}


def _emit(payload: bytes, output: str | None):
    if output:
        Path(output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def cmd_solve(args) -> int:
    try:
        cover = _read_cover(args.cover)
    except (MalformedInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if (args.s is None) != (args.a is None):
        print("error: --s and --a go together", file=sys.stderr)
        return EXIT_INPUT
    opts = dict(algorithm=args.algorithm, max_nodes=args.max_nodes, budget_ms=args.budget_ms,
                threshold=args.threshold, cover=cover, s=args.s, a=args.a)
    jobs = [(p, opts) for p in args.instances]
    if len(jobs) == 1:
        code, out = _solve_one(jobs[0])
        if "error" in out:
            print(f"error: {out['error']}", file=sys.stderr)
            return code
        _emit(_canonical_bytes(out), args.output)
        return code
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_solve_one, jobs))
    else:
        results = [_solve_one(j) for j in jobs]
    lines = []
    for (path, _), (code, out) in zip(jobs, results):
        lines.append(json.dumps({"instance": path, "exit": code, **out}, sort_keys=True,
                                separators=(",", ":")))
    _emit(("\n".join(lines) + "\n").encode(), args.output)
    return max(code for code, _ in results)


def cmd_verify(args) -> int:
    try:
        inst = _read_instance(args.instance)
        dec = load_decomposition(Path(args.decomposition).read_text())
        problem = explain(inst, dec)
    except (MalformedInputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if problem is None:
        print("OK")
        return 0
    print(problem)
    return 1


def _parse_params(items: Sequence[str]) -> dict:
    params = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise MalformedInputError(f"parameter {item!r} is not key=value")
        try:
            params[key] = json.loads(val)
        except json.JSONDecodeError:
            params[key] = val
    return params


def cmd_generate(args) -> int:
    from .reductions import generate
    try:
        inst, expected = generate(args.kind, _parse_params(args.params), args.seed)
    except (MalformedInputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = instance_to_dict(inst)
    if expected is not None:
        out["expected"] = "YES" if expected else "NO"
    _emit(_canonical_bytes(out), args.output)
    return 0


def cmd_expansion(args) -> int:
    from .expansion import edge_expansion
    try:
        data = sys.stdin.read() if args.graph == "-" else Path(args.graph).read_text()
        obj = json.loads(data)
        if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
            raise MalformedInputError("graph file needs 'n' and 'edges'")
        graph = Graph(obj["n"], tuple(tuple(e) for e in obj["edges"]),
                      tuple(obj["multiplicity"]) if "multiplicity" in obj else None)
        phi = edge_expansion(graph, cap=args.cap)
    except json.JSONDecodeError as exc:
        print(f"error: JSON parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MalformedInputError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = "inf" if phi == math.inf else f"{phi.numerator}/{phi.denominator}"
    _emit((text + "\n").encode(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stardec", description="Star decomposition solvers.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="decide an instance and print a report")
    sp.add_argument("instances", nargs="+", help="instance JSON files ('-' for stdin)")
    sp.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    sp.add_argument("--budget-ms", type=float, default=None, help="wall-clock budget")
    sp.add_argument("--max-nodes", type=int, default=None, help="search node budget")
    sp.add_argument("--threshold", type=int, default=None,
                    help="class size for blocks in ndfpt (default 4 * max length)")
    sp.add_argument("--cover", default=None,
                    help="vertex cover file (ilp2, vcxp) or stable set (tarsi)")
    sp.add_argument("--s", type=_int_csv, default=None,
                    help="read instances as edge lists with these lengths")
    sp.add_argument("--a", type=_int_csv, default=None, help="counts to go with --s")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers for several files")
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_solve)

    vp = sub.add_parser("verify", help="check a decomposition against an instance")
    vp.add_argument("instance")
    vp.add_argument("decomposition")
    vp.set_defaults(func=cmd_verify)

    gp = sub.add_parser("generate", help="emit a generated instance")
    gp.add_argument("kind", help="gnm, complete, complete-bipartite, tree-depth-2, cubic, "
                                 "binpacking-kmn, binpacking-tree, indepset")
    gp.add_argument("params", nargs="*", help="key=value pairs, values as JSON")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--output", default=None)
    gp.set_defaults(func=cmd_generate)

    ep = sub.add_parser("expansion", help="exact edge expansion as a fraction")
    ep.add_argument("graph")
    ep.add_argument("--cap", type=int, default=20, help="largest vertex count to enumerate")
    ep.add_argument("--output", default=None)
    ep.set_defaults(func=cmd_expansion)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    level = os.environ.get("STARDEC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(name)s %(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
