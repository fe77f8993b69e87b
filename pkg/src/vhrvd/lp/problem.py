"""Linear program containers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


def _as_matrix(a, ncols):
    if a is None:
        return np.zeros((0, ncols))
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return np.zeros((0, ncols))
    return a.reshape(1, -1) if a.ndim == 1 else a


@dataclass(frozen=True)
class LpProblem:
    """``min c @ z`` s.t. ``A_ub @ z <= b_ub``, ``A_eq @ z == b_eq``, ``lb <= z <= ub``.

    Missing blocks may be passed as ``None``. Bounds default to ``z >= 0``.
    """

    c: np.ndarray
    A_ub: np.ndarray = None
    b_ub: np.ndarray = None
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    lb: np.ndarray = None
    ub: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        n = c.size
        A_ub = _as_matrix(self.A_ub, n)
        A_eq = _as_matrix(self.A_eq, n)
        b_ub = np.zeros(0) if self.b_ub is None else np.asarray(self.b_ub, dtype=float).ravel()
        b_eq = np.zeros(0) if self.b_eq is None else np.asarray(self.b_eq, dtype=float).ravel()
        lb = np.zeros(n) if self.lb is None else np.broadcast_to(np.asarray(self.lb, dtype=float), (n,)).copy()
        ub = np.full(n, np.inf) if self.ub is None else np.broadcast_to(np.asarray(self.ub, dtype=float), (n,)).copy()

        if A_ub.shape != (b_ub.size, n):
            raise ValueError(f"A_ub has shape {A_ub.shape}, expected ({b_ub.size}, {n})")
        if A_eq.shape != (b_eq.size, n):
            raise ValueError(f"A_eq has shape {A_eq.shape}, expected ({b_eq.size}, {n})")
        for name, arr in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq), ("b_eq", b_eq),
                          ("lb", lb), ("ub", ub)):
            if np.isnan(arr).any():
                raise ValueError(f"{name} contains NaN")
        if not (np.isfinite(A_ub).all() and np.isfinite(A_eq).all() and np.isfinite(c).all()):
            raise ValueError("c, A_ub and A_eq must be finite")
        if not (np.isfinite(b_ub).all() and np.isfinite(b_eq).all()):
            raise ValueError("b_ub and b_eq must be finite")
        if np.isposinf(lb).any() or np.isneginf(ub).any():
            raise ValueError("lb may not be +inf and ub may not be -inf")

        for name, arr in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq),
                          ("b_eq", b_eq), ("lb", lb), ("ub", ub)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_rows(self) -> int:
        return self.b_ub.size + self.b_eq.size

    def violation(self, z) -> float:
        """Largest violation of any row or bound at ``z`` (0 when feasible)."""
        z = np.asarray(z, dtype=float)
        worst = 0.0
        if self.b_ub.size:
            worst = max(worst, float(np.max(self.A_ub @ z - self.b_ub, initial=0.0)))
        if self.b_eq.size:
            worst = max(worst, float(np.max(np.abs(self.A_eq @ z - self.b_eq))))
        worst = max(worst, float(np.max(self.lb - z, initial=0.0)))
        worst = max(worst, float(np.max(z - self.ub, initial=0.0)))
        return worst


@dataclass
class LpSolution:
    """Result of :func:`vhrvd.lp.solve`.

    ``y_ub`` and ``y_eq`` are row multipliers recovered from the final basis
    (``y_ub <= 0`` at optimality, sign convention of ``c - A.T @ y``).
    """

    status: LpStatus
    z: np.ndarray | None = None
    objective: float = float("nan")
    iterations: int = 0
    phase1_iterations: int = 0
    y_ub: np.ndarray | None = field(default=None, repr=False)
    y_eq: np.ndarray | None = field(default=None, repr=False)
    max_violation: float = float("nan")

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL
