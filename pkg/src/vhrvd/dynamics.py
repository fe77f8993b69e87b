"""Normalized Hill-Clohessy-Wiltshire relative motion.

States are scaled so that one unit of position is ``a_max / eta**2`` metres
and one unit of velocity is ``a_max / eta`` m/s; time is scaled by the mean
motion (``tau = eta * t``) and the input is ``u = a / a_max``, so that the
admissible input set is the unit box.

Input sequences are stored chronologically as an ``(N, 3)`` array
``[u(k0), ..., u(k0+N-1)]``. The reachability matrix is laid out to match
the flattened array: column block ``j`` of ``R_N`` is ``A**(N-1-j) @ B``,
so ``x(k0+N) = A**N @ x0 + R_N @ u.ravel()``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

N_STATE = 6
N_INPUT = 3


@dataclass(frozen=True)
class ScenarioScales:
    eta: float       # target mean motion, rad/s
    a_max: float     # max per-axis acceleration, m/s^2
    tau_s: float     # sampling interval in scaled time, rad/sample
    k0: int = 0
    t0: float = 0.0  # epoch of sample k0, s

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not self.a_max > 0:
            raise ValueError("a_max must be positive")
        if not self.tau_s > 0:
            raise ValueError("tau_s must be positive")
        if self.k0 < 0:
            raise ValueError("k0 must be non-negative")

    @property
    def position_scale(self) -> float:
        """Multiply metres by this to get normalized position."""
        return self.eta**2 / self.a_max

    @property
    def velocity_scale(self) -> float:
        return self.eta / self.a_max

    @property
    def seconds_per_sample(self) -> float:
        return self.tau_s / self.eta

    def time_of(self, k) -> float:
        """Physical time of sample ``k``, s."""
        return self.t0 + (k - self.k0) * self.seconds_per_sample


@dataclass(frozen=True)
class PhysicalRelativeState:
    p: np.ndarray  # m, RTN
    v: np.ndarray  # m/s, RTN

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(3))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float).reshape(3))
        if not (np.isfinite(self.p).all() and np.isfinite(self.v).all()):
            raise ValueError("relative state must be finite")


def normalize(state: PhysicalRelativeState, scales: ScenarioScales) -> np.ndarray:
    """Physical RTN position/velocity -> normalized 6-state."""
    return np.concatenate([scales.position_scale * state.p, scales.velocity_scale * state.v])


def denormalize(x, scales: ScenarioScales) -> PhysicalRelativeState:
    x = np.asarray(x, dtype=float)
    return PhysicalRelativeState(x[:3] / scales.position_scale, x[3:] / scales.velocity_scale)


def hcw_continuous():
    """Continuous-time normalized HCW pair ``(A_c, B_c)``."""
    A_c = np.zeros((6, 6))
    A_c[:3, 3:] = np.eye(3)
    A_c[3, 0] = 3.0
    A_c[3, 4] = 2.0
    A_c[4, 3] = -2.0
    A_c[5, 2] = -1.0
    B_c = np.zeros((6, 3))
    B_c[3:, :] = np.eye(3)
    return A_c, B_c


@dataclass(frozen=True)
class DiscreteModel:
    A: np.ndarray
    B: np.ndarray
    tau_s: float


def discretize(tau_s: float) -> DiscreteModel:
    """Zero-order-hold discretization via the exponential of the augmented matrix."""
    if tau_s < 0:
        raise ValueError("tau_s must be non-negative")
    A_c, B_c = hcw_continuous()
    M = np.zeros((9, 9))
    M[:6, :6] = A_c
    M[:6, 6:] = B_c
    E = expm(M * tau_s)
    A = E[:6, :6].copy()
    B = E[:6, 6:].copy()
    A.setflags(write=False)
    B.setflags(write=False)
    return DiscreteModel(A, B, float(tau_s))


def _pinv(M, rcond=1e-12):
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    keep = s > rcond * s[0] if s.size else s > 0
    return (Vt[keep].T / s[keep]) @ U[:, keep].T


class ReachabilityTable:
    """``A**N``, ``R_N`` and ``pinv(R_N)`` for ``N = 0..N_ub``.

    ``reach[0]`` and ``pinv[0]`` are empty placeholders so that indices match
    horizons.
    """

    def __init__(self, model: DiscreteModel, N_ub: int):
        if N_ub < 1:
            raise ValueError("N_ub must be at least 1")
        self.N_ub = int(N_ub)
        A, B = model.A, model.B
        powers = [np.eye(6)]
        for _ in range(N_ub):
            powers.append(A @ powers[-1])
        # AkB[i] = A**i @ B
        AkB = [powers[i] @ B for i in range(N_ub)]
        reach = [np.zeros((6, 0))]
        for N in range(1, N_ub + 1):
            reach.append(np.hstack(AkB[N - 1::-1]))
        self.powers = powers
        self.AkB = AkB
        self.reach = reach
        self.pinv = [np.zeros((0, 6))] + [_pinv(R) for R in reach[1:]]


def propagate(model: DiscreteModel, x0, u) -> np.ndarray:
    """States ``x(k0)..x(k0+N)`` as an ``(N+1, 6)`` array."""
    u = np.asarray(u, dtype=float).reshape(-1, 3)
    xs = np.empty((u.shape[0] + 1, 6))
    xs[0] = x0
    for k in range(u.shape[0]):
        xs[k + 1] = model.A @ xs[k] + model.B @ u[k]
    return xs


def min_energy(table: ReachabilityTable, model: DiscreteModel, x0, xd, N: int):
    """Least-squares input sequence steering ``x0`` to ``xd`` in ``N`` steps.

    Returns ``(e_N, residual)`` where ``e_N`` is the flattened chronological
    sequence and ``residual`` the 2-norm terminal miss.
    """
    if not 1 <= N <= table.N_ub:
        raise ValueError(f"N={N} outside 1..{table.N_ub}")
    target = np.asarray(xd, dtype=float) - table.powers[N] @ np.asarray(x0, dtype=float)
    e = table.pinv[N] @ target
    residual = float(np.linalg.norm(table.reach[N] @ e - target))
    return e, residual
