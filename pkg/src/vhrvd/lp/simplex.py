"""Two-phase bounded revised simplex.

The problem is brought to ``A x = b, 0 <= x <= u`` with one slack per
inequality row and one artificial per row whose slack cannot start in the
basis. Phase 1 minimises the artificial sum; phase 2 fixes the artificials
at zero and minimises the true cost. Pivots run inside a compiled kernel
when available (see :mod:`vhrvd.lp._backend`); the explicit basis inverse
is refactorised every ``REFACTOR_EVERY`` pivots.
"""

from __future__ import annotations

import numpy as np

from vhrvd.lp import _backend
from vhrvd.lp.problem import LpProblem, LpSolution, LpStatus

FEAS_TOL = 1e-8
OPT_TOL = 1e-8
PIV_TOL = 1e-9
REFACTOR_EVERY = 50

_RULES = {"bland": 0, "dantzig": 1}


class _StandardForm:
    """Bookkeeping for ``A x = b, 0 <= x <= u`` built from an :class:`LpProblem`."""

    def __init__(self, problem: LpProblem):
        p = problem
        n = p.n_vars
        lb, ub = p.lb, p.ub

        # column map: z_j = offset_j + sign_j * x_col   (+ optional negative split column)
        cols = []          # (orig index, sign)
        offset = np.zeros(n)
        uppers = []
        for j in range(n):
            lo, hi = lb[j], ub[j]
            if np.isfinite(lo):
                offset[j] = lo
                cols.append((j, 1.0))
                uppers.append(hi - lo)
            elif np.isfinite(hi):
                offset[j] = hi
                cols.append((j, -1.0))
                uppers.append(np.inf)
            else:
                cols.append((j, 1.0))
                uppers.append(np.inf)
                cols.append((j, -1.0))
                uppers.append(np.inf)
        self.n_orig = n
        self.cols = cols
        self.offset = offset
        n_struct = len(cols)
        self.n_struct = n_struct

        col_idx = np.array([c[0] for c in cols], dtype=np.int64)
        col_sgn = np.array([c[1] for c in cols])
        self.col_idx, self.col_sgn = col_idx, col_sgn

        m_ub, m_eq = p.b_ub.size, p.b_eq.size
        m = m_ub + m_eq
        self.m_ub, self.m_eq, self.m = m_ub, m_eq, m

        rows = np.vstack([p.A_ub, p.A_eq]) if m else np.zeros((0, n))
        rhs = np.concatenate([p.b_ub, p.b_eq]) - rows @ offset
        struct = rows[:, col_idx] * col_sgn

        # equilibrate rows to unit max-coefficient; all-zero rows are left alone
        scale = np.max(np.abs(struct), axis=1, initial=0.0) if m else np.zeros(0)
        scale = np.where(scale > 0, 1.0 / np.where(scale > 0, scale, 1.0), 1.0)
        struct = struct * scale[:, None]
        rhs = rhs * scale

        # rows with negative rhs are flipped so the starting basis is feasible
        flip = np.where(rhs < 0, -1.0, 1.0)
        self.row_sign = flip * scale
        rhs = rhs * flip
        struct = struct * flip[:, None]

        slack_rows = np.arange(m_ub)
        needs_art = np.ones(m, dtype=bool)
        needs_art[slack_rows[flip[:m_ub] > 0]] = False
        art_rows = np.flatnonzero(needs_art)
        self.n_slack = m_ub
        self.n_art = art_rows.size

        ntot = n_struct + m_ub + art_rows.size
        A = np.zeros((m, ntot), order="F")
        A[:, :n_struct] = struct
        A[slack_rows, n_struct + slack_rows] = flip[:m_ub]
        A[art_rows, n_struct + m_ub + np.arange(art_rows.size)] = 1.0
        self.A = A
        self.b = rhs
        self.upper = np.concatenate([np.array(uppers, dtype=float),
                                     np.full(m_ub, np.inf), np.full(art_rows.size, np.inf)])
        self.cost = np.zeros(ntot)
        self.cost[:n_struct] = p.c[col_idx] * col_sgn
        self.art_start = n_struct + m_ub

        basis = np.empty(m, dtype=np.int64)
        basis[art_rows] = self.art_start + np.arange(art_rows.size)
        plain = np.flatnonzero(~needs_art)
        basis[plain] = n_struct + plain
        self.basis = basis
        self.state = np.ones(ntot, dtype=np.int8)
        self.state[basis] = 0
        self.binv = np.eye(m)
        self.xb = rhs.copy()
        self.ctl = np.zeros(1, dtype=np.int64)
        self.infeasible_bounds = bool(np.any(self.upper < 0))

    def refactor(self):
        at_up = np.flatnonzero(self.state == 2)
        rhs = self.b - self.A[:, at_up] @ self.upper[at_up] if at_up.size else self.b
        if self.m:
            self.binv = np.ascontiguousarray(np.linalg.inv(self.A[:, self.basis]))
            self.xb = self.binv @ rhs

    def x_full(self) -> np.ndarray:
        x = np.where(self.state == 2, self.upper, 0.0)
        x[self.basis] = self.xb
        return np.clip(x, 0.0, self.upper)

    def z(self) -> np.ndarray:
        x = self.x_full()[: self.n_struct]
        z = self.offset.copy()
        np.add.at(z, self.col_idx, self.col_sgn * x)
        return z


def _run(sf: _StandardForm, cost, max_iter, opt_tol, rule, used):
    """Pivot until optimal / unbounded / budget; returns (code, pivots)."""
    total = 0
    sf.ctl[0] = 0
    while True:
        budget = min(REFACTOR_EVERY, max_iter - used - total)
        if budget <= 0:
            return _backend.BUDGET, total
        code, k = _backend.run_pivots(sf.A, cost, sf.upper, sf.basis, sf.state, sf.binv,
                                      sf.xb, sf.ctl, budget, opt_tol, PIV_TOL, rule)
        total += k
        sf.refactor()
        if code != _backend.BUDGET:
            if code == _backend.OPTIMAL and k > 0:
                # confirm optimality on the freshly refactorised basis
                continue
            return code, total


def _phase1(sf: _StandardForm, feas_tol, max_iter, rule):
    if sf.infeasible_bounds:
        return False, 0
    if sf.n_art == 0:
        return True, 0
    cost1 = np.zeros(sf.A.shape[1])
    cost1[sf.art_start:] = 1.0
    code, k = _run(sf, cost1, max_iter, OPT_TOL, rule, 0)
    if code == _backend.BUDGET:
        return None, k
    infeas = float(sf.x_full()[sf.art_start:].sum())
    return infeas <= feas_tol, k


def _default_max_iter(problem: LpProblem) -> int:
    return 50 * (problem.n_rows + problem.n_vars)


def check_feasible(problem: LpProblem, feas_tol: float = FEAS_TOL, max_iter: int | None = None,
                   rule: str = "dantzig") -> bool:
    """Phase 1 only: True when the feasible set is nonempty."""
    sf = _StandardForm(problem)
    max_iter = _default_max_iter(problem) if max_iter is None else max_iter
    ok, _ = _phase1(sf, feas_tol, max_iter, _RULES[rule])
    if ok is None:
        raise RuntimeError("iteration limit reached in phase 1")
    return ok


def solve(problem: LpProblem, feas_tol: float = FEAS_TOL, opt_tol: float = OPT_TOL,
          max_iter: int | None = None, rule: str = "dantzig") -> LpSolution:
    """Solve ``problem`` with the two-phase bounded simplex.

    Parameters
    ----------
    feas_tol
        Phase-1 optimum above this declares the problem infeasible.
    opt_tol
        Reduced-cost tolerance of the optimality test.
    max_iter
        Pivot budget over both phases, default ``50 * (rows + cols)``.
    rule
        ``"dantzig"`` (largest reduced cost, switching to the smallest
        eligible index during long degenerate runs) or ``"bland"``
        (always the smallest eligible index). Both terminate finitely.
    """
    rule_id = _RULES[rule]
    max_iter = _default_max_iter(problem) if max_iter is None else max_iter
    sf = _StandardForm(problem)

    ok, k1 = _phase1(sf, feas_tol, max_iter, rule_id)
    if ok is None:
        return LpSolution(LpStatus.ITERATION_LIMIT, iterations=k1, phase1_iterations=k1)
    if not ok:
        return LpSolution(LpStatus.INFEASIBLE, iterations=k1, phase1_iterations=k1)

    sf.upper[sf.art_start:] = 0.0
    code, k2 = _run(sf, sf.cost, max_iter, opt_tol, rule_id, k1)
    iters = k1 + k2
    if code == _backend.BUDGET:
        return LpSolution(LpStatus.ITERATION_LIMIT, iterations=iters, phase1_iterations=k1)
    if code == _backend.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED, iterations=iters, phase1_iterations=k1)

    z = sf.z()
    y = sf.cost[sf.basis] @ sf.binv if sf.m else np.zeros(0)
    y = y * sf.row_sign
    return LpSolution(
        LpStatus.OPTIMAL,
        z=z,
        objective=float(problem.c @ z),
        iterations=iters,
        phase1_iterations=k1,
        y_ub=y[: sf.m_ub],
        y_eq=y[sf.m_ub:],
        max_violation=problem.violation(z),
    )
