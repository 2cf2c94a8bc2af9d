"""Clustered shortest-path tree solver: randomized-greedy construction, exact oracle, benchmark harness."""

from clustp.core import ClusteredInstance, EdgeRef, build_instance
from clustp.nrga import NrgaParams, nrga_run
from clustp.objective import SolutionTree, check_feasible, total_cost

__all__ = [
    "ClusteredInstance",
    "EdgeRef",
    "NrgaParams",
    "SolutionTree",
    "build_instance",
    "check_feasible",
    "nrga_run",
    "total_cost",
]
