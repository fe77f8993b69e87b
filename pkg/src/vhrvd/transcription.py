"""Fixed-horizon LP: minimum fuel for a given number of steps.

For a fixed horizon ``N`` the cost ``N + gamma * |u|_1`` reduces to the
fuel term, which is linear once the absolute values are lifted. States are
eliminated (condensed form): every constrained position is written as an
affine function of the stacked chronological input ``u``.

Two equivalent liftings are available:

``"split"`` (default)
    ``z = [u_plus, u_minus]``, ``u = u_plus - u_minus``, both in ``[0, 1]``,
    cost ``gamma * sum(z)``. No extra rows.
``"epigraph"``
    ``z = [u, s]`` with ``-1 <= u <= 1`` and rows ``u - s <= 0``,
    ``-u - s <= 0``; cost ``gamma * sum(s)``.

The constant ``N`` is added to the LP objective on readout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from vhrvd import lp
from vhrvd.constraints import (
    ConstraintScheduleParams,
    HalfspaceSet,
    docking_polytope,
    geodesic,
    rendezvous_halfspace,
)
from vhrvd.dynamics import DiscreteModel, ReachabilityTable, propagate
from vhrvd.target_motion import ReferenceTrajectory, rotation_matrix

VERIFY_TOL = 1e-7
U_TOL = 1e-8


class HorizonStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


class TranscriptionFault(RuntimeError):
    """LP result that cannot come from a well-posed fixed-horizon problem."""


@dataclass
class FixedHorizonSolution:
    status: HorizonStatus
    N: int
    gamma: float
    J: float = math.inf
    fuel: float = math.inf
    u: np.ndarray | None = None        # (N, 3), chronological
    states: np.ndarray | None = None   # (N+1, 6)
    lp_iterations: int = 0
    max_violation: float = math.nan

    @property
    def feasible(self) -> bool:
        return self.status is HorizonStatus.OPTIMAL


@dataclass
class HorizonProblem:
    """Everything a fixed-horizon solve needs apart from ``N``."""

    model: DiscreteModel
    table: ReachabilityTable
    reference: ReferenceTrajectory
    params: ConstraintScheduleParams
    x0: np.ndarray
    gamma: float
    formulation: str = "split"
    lp_options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float).reshape(6)
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.formulation not in ("split", "epigraph"):
            raise ValueError(f"unknown formulation {self.formulation!r}")

    @property
    def k0(self) -> int:
        return self.reference.scales.k0

    @property
    def N_ub(self) -> int:
        return min(self.table.N_ub, self.reference.N_ub)

    def schedule_sets(self, N: int) -> list[HalfspaceSet]:
        """Constraint set for each step ``k0 .. k0+N-1``."""
        k0 = self.k0
        lam = N - self.params.N_d
        sets = []
        if lam > 0:
            h0 = self.x0[:3] / np.linalg.norm(self.x0[:3])
            axis, arc = geodesic(self.x0[:3], self.reference.at(k0 + lam)[:3])
            for i in range(lam):
                nu = h0 if axis is None else rotation_matrix(axis, i / lam * arc) @ h0
                sets.append(rendezvous_halfspace(nu / np.linalg.norm(nu), self.params.r))
        for i in range(max(lam, 0), N):
            sets.append(docking_polytope(self.reference.at(k0 + i)[:3], self.params.alpha))
        return sets

    def condensed(self, N: int):
        """``(P, G)`` with ``x(k0+i) = P[i] @ x0 + G[i] @ u.ravel()`` for ``i = 0..N``."""
        P = np.stack(self.table.powers[: N + 1])
        G = np.zeros((N + 1, 6, 3 * N))
        AkB = self.table.AkB
        for i in range(1, N + 1):
            for j in range(i):
                G[i, :, 3 * j:3 * j + 3] = AkB[i - 1 - j]
        return P, G

    def build_lp(self, N: int) -> lp.LpProblem:
        if N < 1:
            raise ValueError("horizon must be at least one step")
        if self.k0 + N > self.k0 + self.reference.N_ub or N > self.table.N_ub:
            raise ValueError(f"reference/tables do not cover horizon N={N}")
        P, G = self.condensed(N)
        m = 3 * N
        rows, rhs = [], []
        for i, hs in enumerate(self.schedule_sets(N)):
            rows.append(hs.a @ G[i, :3])
            rhs.append(hs.b - hs.a @ (P[i, :3] @ self.x0))
        S = np.vstack(rows)
        s_rhs = np.concatenate(rhs)
        E = G[N]
        e_rhs = self.reference.at(self.k0 + N) - P[N] @ self.x0

        g = float(self.gamma)
        if self.formulation == "split":
            return lp.LpProblem(
                c=np.full(2 * m, g),
                A_ub=np.hstack([S, -S]), b_ub=s_rhs,
                A_eq=np.hstack([E, -E]), b_eq=e_rhs,
                lb=np.zeros(2 * m), ub=np.ones(2 * m),
            )
        eye = np.eye(m)
        A_ub = np.vstack([
            np.hstack([eye, -eye]),
            np.hstack([-eye, -eye]),
            np.hstack([S, np.zeros_like(S)]),
        ])
        b_ub = np.concatenate([np.zeros(2 * m), s_rhs])
        return lp.LpProblem(
            c=np.concatenate([np.zeros(m), np.full(m, g)]),
            A_ub=A_ub, b_ub=b_ub,
            A_eq=np.hstack([E, np.zeros_like(E)]), b_eq=e_rhs,
            lb=np.concatenate([-np.ones(m), np.zeros(m)]),
            ub=np.concatenate([np.ones(m), np.full(m, np.inf)]),
        )

    def controls_from(self, z, N: int) -> np.ndarray:
        m = 3 * N
        if self.formulation == "split":
            u = z[:m] - z[m:]
        else:
            u = z[:m]
        return u.reshape(N, 3)

    def verify(self, N: int, u) -> float:
        """Worst violation of input box, scheduled sets and terminal equality
        for ``u`` replayed through the step-by-step recursion."""
        u = np.asarray(u, dtype=float).reshape(N, 3)
        xs = propagate(self.model, self.x0, u)
        worst = max(0.0, float(np.max(np.abs(u))) - 1.0)
        for i, hs in enumerate(self.schedule_sets(N)):
            worst = max(worst, hs.violation(xs[i, :3]))
        worst = max(worst, float(np.max(np.abs(xs[N] - self.reference.at(self.k0 + N)))))
        return worst

    def solve(self, N: int) -> FixedHorizonSolution:
        problem = self.build_lp(N)
        res = lp.solve(problem, **self.lp_options)
        if res.status is lp.LpStatus.INFEASIBLE:
            return FixedHorizonSolution(HorizonStatus.INFEASIBLE, N, self.gamma,
                                        lp_iterations=res.iterations)
        if res.status is not lp.LpStatus.OPTIMAL:
            raise TranscriptionFault(f"LP at N={N} ended with status {res.status.value}")
        u = self.controls_from(res.z, N)
        fuel = float(np.abs(u).sum())
        xs = propagate(self.model, self.x0, u)
        viol = self.verify(N, u)
        if viol > VERIFY_TOL:
            raise TranscriptionFault(f"solution at N={N} violates constraints by {viol:.3e}")
        return FixedHorizonSolution(
            HorizonStatus.OPTIMAL, N, self.gamma,
            J=N + self.gamma * fuel, fuel=fuel, u=u, states=xs,
            lp_iterations=res.iterations, max_violation=viol,
        )


def build_lp(model, reference, schedule_params, x0, k0, N, gamma, table=None, formulation="split"):
    """Functional form of :meth:`HorizonProblem.build_lp`."""
    if k0 != reference.scales.k0:
        raise ValueError("k0 does not match the reference trajectory")
    table = table or ReachabilityTable(model, N)
    return HorizonProblem(model, table, reference, schedule_params, x0, gamma, formulation).build_lp(N)


def solve_fixed_horizon(model, reference, schedule_params, x0, k0, N, gamma, table=None,
                        formulation="split"):
    if k0 != reference.scales.k0:
        raise ValueError("k0 does not match the reference trajectory")
    table = table or ReachabilityTable(model, N)
    return HorizonProblem(model, table, reference, schedule_params, x0, gamma, formulation).solve(N)
