"""Outer search over the horizon length.

The fixed-horizon cost ``J*_N`` is nonconvex in ``N`` (the docking point
keeps moving), so three strategies are provided:

* :func:`plan` - prune horizons that cannot satisfy the terminal equality
  with a unit-box input (minimum-energy test), start from the horizon that
  minimises the minimum-energy cost, ring-search for a feasible LP, then
  walk downhill along the pruned set.
* :func:`enumerate_all` - solve every horizon (global optimum).
* :func:`binary_search_baseline` - integer ternary search on ``1..N_ub``.
"""

from __future__ import annotations

import bisect
import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from vhrvd.dynamics import ReachabilityTable, min_energy
from vhrvd.target_motion import ReferenceTrajectory
from vhrvd.transcription import FixedHorizonSolution, HorizonProblem

MEMBERSHIP_TOL = 1e-7
N_INPUT = 3


@dataclass(frozen=True)
class FeasibleSet:
    """Horizons passing the minimum-energy necessary condition, ascending.

    ``energy[N] = (e_N, |e_N|_1, |e_N|_2)`` is kept for every tested ``N``.
    """

    members: tuple
    energy: dict = field(repr=False)

    def __len__(self):
        return len(self.members)

    def __contains__(self, N):
        return self.index(N) is not None

    def __iter__(self):
        return iter(self.members)

    def index(self, N):
        i = bisect.bisect_left(self.members, N)
        if i < len(self.members) and self.members[i] == N:
            return i
        return None


def feasible_set(table: ReachabilityTable, x0, reference: ReferenceTrajectory, k0: int, N_ub: int,
                 tol: float = MEMBERSHIP_TOL) -> FeasibleSet:
    """Horizons ``N`` whose least-squares input hits ``xd(k0+N)`` (inf-norm miss
    within ``tol``) with ``|e_N|_2 <= sqrt(3 N)``."""
    x0 = np.asarray(x0, dtype=float)
    members, energy = [], {}
    for N in range(1, N_ub + 1):
        xd = reference.at(k0 + N)
        e, _ = min_energy(table, None, x0, xd, N)
        miss = float(np.max(np.abs(table.powers[N] @ x0 + table.reach[N] @ e - xd)))
        n1, n2 = float(np.abs(e).sum()), float(np.linalg.norm(e))
        energy[N] = (e, n1, n2)
        if miss <= tol and n2 <= math.sqrt(N_INPUT * N):
            members.append(N)
    return FeasibleSet(tuple(members), energy)


def initial_guess(F: FeasibleSet, gamma: float) -> int:
    """``argmin_{N in F} N + gamma |e_N|_1``; ties go to the smaller ``N``."""
    if not F.members:
        raise ValueError("empty feasible set")
    best, best_cost = None, math.inf
    for N in F.members:
        cost = N + gamma * F.energy[N][1]
        if cost < best_cost:
            best, best_cost = N, cost
    return best


class HorizonCosts:
    """Memoised ``J*_N``; counts distinct LP solves."""

    def __init__(self, solver):
        self._solver = solver
        self.solutions: dict[int, FixedHorizonSolution] = {}
        self.order: list[int] = []

    def solution(self, N: int) -> FixedHorizonSolution:
        if N not in self.solutions:
            self.solutions[N] = self._solver(N)
            self.order.append(N)
        return self.solutions[N]

    def __call__(self, N: int) -> float:
        return self.solution(N).J

    @property
    def lps_solved(self) -> int:
        return len(self.solutions)


def expanding_ring_feasibility(F: FeasibleSet, N1: int, cost) -> int | None:
    """First feasible horizon found probing ``F`` outward from ``N1``.

    Returns ``None`` when every member of ``F`` is infeasible.
    """
    q1 = F.index(N1)
    if q1 is None:
        raise ValueError("N1 must belong to F")
    members = F.members
    if math.isfinite(cost(members[q1])):
        return N1
    for i in range(1, len(members)):
        hi = members[q1 + i] if q1 + i < len(members) else None
        lo = members[q1 - i] if q1 - i >= 0 else None
        if hi is None and lo is None:
            break
        J_hi = cost(hi) if hi is not None else math.inf
        J_lo = cost(lo) if lo is not None else math.inf
        if math.isfinite(J_hi) or math.isfinite(J_lo):
            return hi if J_hi < J_lo else lo
    return None


def _walk(members, q, step, cost):
    cur = members[q]
    J_cur = cost(cur)
    q += step
    while 0 <= q < len(members):
        J_next = cost(members[q])
        if J_next >= J_cur:
            break
        cur, J_cur = members[q], J_next
        q += step
    return cur


def monotone_descent(F: FeasibleSet, N1: int, N2: int, cost) -> int:
    """Walk ``F`` away from ``N1`` through ``N2`` while the cost keeps decreasing."""
    members = F.members
    q2 = F.index(N2)
    if N2 > N1:
        return _walk(members, q2, +1, cost)
    if N2 < N1:
        return _walk(members, q2, -1, cost)
    J_lo = cost(members[q2 - 1]) if q2 > 0 else math.inf
    J_mid = cost(N1)
    J_hi = cost(members[q2 + 1]) if q2 + 1 < len(members) else math.inf
    J_min = min(J_lo, J_mid, J_hi)
    if J_lo == J_min and J_lo < J_mid:
        return _walk(members, q2, -1, cost)
    if J_hi == J_min and J_hi < J_mid:
        return _walk(members, q2, +1, cost)
    return N1


class PlanStatus(enum.Enum):
    PLANNED = "planned"
    INFEASIBLE = "infeasible"


@dataclass
class PlanResult:
    status: PlanStatus
    N_hat: int | None = None
    solution: FixedHorizonSolution | None = None
    N1: int | None = None
    N2: int | None = None
    lps_solved: int = 0
    F_size: int = 0
    cost_log: dict = field(default_factory=dict)
    wall_s: float = 0.0

    @property
    def J(self) -> float:
        return self.solution.J if self.solution is not None else math.inf

    @property
    def fuel(self) -> float:
        return self.solution.fuel if self.solution is not None else math.inf


def plan(problem: HorizonProblem, F: FeasibleSet | None = None) -> PlanResult:
    """Local variable-horizon search (prune, initial guess, ring search, descent)."""
    t_start = time.perf_counter()
    if F is None:
        F = feasible_set(problem.table, problem.x0, problem.reference, problem.k0, problem.N_ub)
    costs = HorizonCosts(problem.solve)

    def done(status, N_hat=None, N1=None, N2=None):
        return PlanResult(
            status, N_hat, costs.solutions.get(N_hat), N1, N2, costs.lps_solved, len(F),
            {N: costs.solutions[N].J for N in costs.order}, time.perf_counter() - t_start,
        )

    if not F.members:
        return done(PlanStatus.INFEASIBLE)
    N1 = initial_guess(F, problem.gamma)
    N2 = expanding_ring_feasibility(F, N1, costs)
    if N2 is None:
        return done(PlanStatus.INFEASIBLE, N1=N1)
    N_hat = monotone_descent(F, N1, N2, costs)
    return done(PlanStatus.PLANNED, N_hat, N1, N2)


@dataclass
class Enumeration:
    solutions: dict          # N -> FixedHorizonSolution
    N_star: int | None
    wall_s: float = 0.0

    @property
    def profile(self) -> dict:
        return {N: s.J for N, s in self.solutions.items()}

    @property
    def J_star(self) -> float:
        return self.solutions[self.N_star].J if self.N_star is not None else math.inf


def enumerate_all(problem: HorizonProblem, workers: int = 1, horizons=None) -> Enumeration:
    """Solve every horizon in ``1..N_ub``; ``N_star`` is the cheapest (smallest on ties)."""
    t_start = time.perf_counter()
    Ns = list(range(1, problem.N_ub + 1)) if horizons is None else list(horizons)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sols = list(pool.map(problem.solve, Ns))
    else:
        sols = [problem.solve(N) for N in Ns]
    solutions = dict(zip(Ns, sols))
    N_star, best = None, math.inf
    for N in Ns:
        if solutions[N].J < best:
            N_star, best = N, solutions[N].J
    return Enumeration(solutions, N_star, time.perf_counter() - t_start)


@dataclass
class BaselineResult:
    N_bs: int | None
    solution: FixedHorizonSolution | None
    probes: int
    wall_s: float = 0.0

    @property
    def J(self) -> float:
        return self.solution.J if self.solution is not None else math.inf


def ternary_search(cost, lo: int, hi: int):
    """Integer ternary search for a minimum of ``cost`` on ``lo..hi``.

    Infeasible points cost ``inf``. When both interior probes tie the left
    third is dropped. Returns ``(argmin or None, probes)`` where probes
    counts distinct evaluations.
    """
    seen = {}

    def f(N):
        if N not in seen:
            seen[N] = cost(N)
        return seen[N]

    while hi - lo + 1 > 3:
        third = (hi - lo) // 3
        m1, m2 = lo + third, hi - third
        if f(m1) < f(m2):
            hi = m2 - 1
        else:
            lo = m1 + 1
    best, best_J = None, math.inf
    for N in range(lo, hi + 1):
        if f(N) < best_J:
            best, best_J = N, f(N)
    return best, len(seen)


def binary_search_baseline(problem: HorizonProblem) -> BaselineResult:
    t_start = time.perf_counter()
    costs = HorizonCosts(problem.solve)
    N_bs, probes = ternary_search(costs, 1, problem.N_ub)
    sol = costs.solutions.get(N_bs) if N_bs is not None else None
    return BaselineResult(N_bs, sol, probes, time.perf_counter() - t_start)
