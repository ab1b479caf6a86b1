"""Exact and parameterized solvers for NP-hard problems on sparse string graphs."""

from .branching import (
    cycle_packing_4approx,
    fvs_branch,
    greedy_color,
    induced_matching_branch,
    list3_branch,
    shortest_cycle,
    vc_branch,
)
from .brute import brute_force
from .problems import PROBLEMS, Problem, Solution, verify
from .tddp import WIDTH_CAP, cycles_from_edges, solve_td

__all__ = [
    "PROBLEMS",
    "Problem",
    "Solution",
    "WIDTH_CAP",
    "brute_force",
    "cycle_packing_4approx",
    "cycles_from_edges",
    "fvs_branch",
    "greedy_color",
    "induced_matching_branch",
    "list3_branch",
    "shortest_cycle",
    "solve_td",
    "vc_branch",
    "verify",
]
