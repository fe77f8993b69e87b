"""Dense two-phase simplex solver used for every fixed-horizon subproblem."""

from vhrvd.lp.problem import LpProblem, LpSolution, LpStatus
from vhrvd.lp.simplex import FEAS_TOL, OPT_TOL, check_feasible, solve

__all__ = ["LpProblem", "LpSolution", "LpStatus", "solve", "check_feasible", "FEAS_TOL", "OPT_TOL"]
