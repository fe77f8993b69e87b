"""Polyhedral position constraints for the rendezvous and docking phases.

During rendezvous the keep-out sphere ``|xi| >= r`` is replaced by a single
half-space ``xi . nu >= r`` whose normal ``nu`` rotates along the great
circle from the initial position direction to the docking-point direction
at the end of rendezvous. During docking the chaser is held inside a
polyhedral pyramid inscribed in the visibility cone at the docking point.

The pyramid bounds the cross-axis offset in the infinity norm of a frame in
which the cone axis is ``e1``. The offset has at most two nonzero
components there, so ``|y|_2 <= sqrt(2) |T y|_inf`` and scaling the cone
slope by ``1/sqrt(2)`` keeps the pyramid inside the cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vhrvd.target_motion import ReferenceTrajectory, rotation_matrix

AXIS_EPS = 1e-9
E1 = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class HalfspaceSet:
    """Rows ``a @ xi <= b`` in normalized position units."""

    a: np.ndarray  # (rows, 3)
    b: np.ndarray  # (rows,)

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if a.shape != (b.size, 3):
            raise ValueError("a must be (rows, 3) matching b")
        if np.any(np.linalg.norm(a, axis=1) == 0.0):
            raise ValueError("zero row normal")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __len__(self):
        return self.b.size

    def violation(self, xi) -> float:
        """Largest row excess at ``xi`` (``<= 0`` inside)."""
        return float(np.max(self.a @ np.asarray(xi, dtype=float) - self.b))

    def contains(self, xi, tol: float = 0.0) -> bool:
        return self.violation(xi) <= tol


@dataclass(frozen=True)
class ConstraintScheduleParams:
    r: float      # keep-out radius, normalized
    alpha: float  # docking cone half-angle, rad
    N_d: int      # docking-phase steps

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("keep-out radius must be positive")
        if not 0 < self.alpha < math.pi / 2:
            raise ValueError("alpha must lie in (0, pi/2)")
        if self.N_d < 1:
            raise ValueError("N_d must be at least 1")


def _unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero-length vector has no direction")
    return v / n


def orthogonal_completion(u) -> np.ndarray:
    """Deterministic unit vector orthogonal to ``u``: cross with the axis of the
    smallest-magnitude component of ``u``."""
    u = _unit(u)
    e = np.zeros(3)
    e[int(np.argmin(np.abs(u)))] = 1.0
    return _unit(np.cross(u, e))


def geodesic(xp0, xpd_end):
    """Rotation axis and total arc from ``xp0`` to ``xpd_end`` directions."""
    h0, h1 = _unit(xp0), _unit(xpd_end)
    axis = np.cross(h0, h1)
    arc = math.acos(min(1.0, max(-1.0, float(h0 @ h1))))
    if np.linalg.norm(axis) < AXIS_EPS:
        if h0 @ h1 > 0:
            return None, 0.0
        return orthogonal_completion(h0), math.pi
    return axis / np.linalg.norm(axis), arc


def hyperplane_normal(xp0, xpd_end, k: int, k0: int, lambda_N: int) -> np.ndarray:
    """Unit normal of the rotating keep-out hyperplane at step ``k``."""
    if lambda_N < 1:
        raise ValueError("lambda_N must be at least 1")
    if not k0 <= k <= k0 + lambda_N:
        raise ValueError("k outside k0..k0+lambda_N")
    h0 = _unit(xp0)
    axis, arc = geodesic(xp0, xpd_end)
    if axis is None:
        return h0
    theta = (k - k0) / lambda_N * arc
    return _unit(rotation_matrix(axis, theta) @ h0)


def rendezvous_halfspace(nu, r: float) -> HalfspaceSet:
    """``xi . nu >= r`` as ``-nu . xi <= -r``."""
    nu = np.asarray(nu, dtype=float)
    return HalfspaceSet(-nu[None, :], np.array([-r]))


def docking_rotation(xpd_hat) -> np.ndarray:
    """Rotation taking the docking direction onto ``e1``."""
    h = _unit(xpd_hat)
    axis = np.cross(h, E1)
    if np.linalg.norm(axis) < AXIS_EPS:
        if h[0] > 0:
            return np.eye(3)
        return rotation_matrix([0.0, 0.0, 1.0], math.pi)
    return rotation_matrix(axis, math.acos(min(1.0, max(-1.0, h[0]))))


def docking_polytope(xpd, alpha: float) -> HalfspaceSet:
    """Six rows ``+-(T P)_i . xi <= c (xi . h - |xpd|)`` with ``c = tan(alpha)/sqrt(2)``.

    ``P`` projects onto the plane orthogonal to the docking direction ``h``.
    The pair from ``T``'s first row has a vanishing projector term and reduces
    to the forward condition ``xi . h >= |xpd|``.
    """
    xpd = np.asarray(xpd, dtype=float)
    dist = np.linalg.norm(xpd)
    h = _unit(xpd)
    T = docking_rotation(h)
    TP = T @ (np.eye(3) - np.outer(h, h))
    c = math.tan(alpha) / math.sqrt(2.0)
    a = np.vstack([TP - c * h, -TP - c * h])
    b = np.full(6, -c * dist)
    return HalfspaceSet(a, b)


def in_cone(xi, xpd, alpha: float, tol: float = 0.0) -> bool:
    """Membership in the quadratic visibility cone with apex at ``xpd``."""
    xi = np.asarray(xi, dtype=float)
    h = _unit(xpd)
    lateral = np.linalg.norm(xi - (xi @ h) * h)
    return lateral <= math.tan(alpha) * ((xi - np.asarray(xpd)) @ h) + tol


def rendezvous_steps(N: int, N_d: int) -> int:
    """Number of rendezvous-phase samples, ``max(N - N_d, 0)``."""
    return max(N - N_d, 0)


def schedule(k: int, N: int, params: ConstraintScheduleParams, x0, reference: ReferenceTrajectory) -> HalfspaceSet:
    """Position constraint set for step ``k`` of an ``N``-step plan."""
    k0 = reference.scales.k0
    if not k0 <= k <= k0 + N - 1:
        raise ValueError("k outside k0..k0+N-1")
    lam = N - params.N_d
    if lam > 0 and k < k0 + lam:
        nu = hyperplane_normal(np.asarray(x0)[:3], reference.at(k0 + lam)[:3], k, k0, lam)
        return rendezvous_halfspace(nu, params.r)
    return docking_polytope(reference.at(k)[:3], params.alpha)


def phase_of(k: int, N: int, k0: int, N_d: int) -> str:
    return "rendezvous" if k < k0 + N - N_d else "docking"
