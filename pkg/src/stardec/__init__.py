"""Star decomposition: exact solvers, certificates and instance generators."""
from .core import (Answer, Graph, Instance, MalformedInputError, SearchBudget, SolveReport,
                   SolverDefect, Star, StarDecomposition, StarSpec, WrongCase, dump_instance,
                   explain, load_instance, verify)
from .expansion import balance_bins, edge_expansion, expander_solve, expansion_lower_bound
from .flows import check_orient_conditions, check_sdr_condition, find_sdr, orient_with_outdegrees
from .ilp import build_ilp1, build_ilp2, min_vertex_cover, solve_feasibility, solve_ilp1, solve_ilp2
from .ndfpt import build_grouping, contract, nd_decompose, ndfpt_solve
from .oracle import enumerate_all_witnesses, naive_solve, oracle_solve
from .polycases import solve_cubic_k13, solve_s_le_2
from .vcxp import dp_feasible, vcxp_solve

__version__ = "0.1.0"

__all__ = [
    "Answer", "Graph", "Instance", "MalformedInputError", "SearchBudget", "SolveReport",
    "SolverDefect", "Star", "StarDecomposition", "StarSpec", "WrongCase", "dump_instance",
    "explain", "load_instance", "verify",
    "balance_bins", "edge_expansion", "expander_solve", "expansion_lower_bound",
    "check_orient_conditions", "check_sdr_condition", "find_sdr", "orient_with_outdegrees",
    "build_ilp1", "build_ilp2", "min_vertex_cover", "solve_feasibility", "solve_ilp1",
    "solve_ilp2",
    "build_grouping", "contract", "nd_decompose", "ndfpt_solve",
    "enumerate_all_witnesses", "naive_solve", "oracle_solve",
    "solve_cubic_k13", "solve_s_le_2",
    "dp_feasible", "vcxp_solve",
]
