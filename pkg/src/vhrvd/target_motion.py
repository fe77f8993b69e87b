"""Docking-point kinematics on a tumbling target.

The docking point is fixed in the target body frame, so in RTN it obeys
``p' = omega(t) x p`` and stays on a sphere about the target centre of mass.
Two spin models are supported:

``ConstantRtnRate``
    ``omega`` constant in RTN; propagated in closed form (axis-angle).
``InertiallyFixedAxis``
    spin axis fixed in inertial space, so in RTN it precesses about the
    orbit normal at the mean motion; propagated with fixed-step RK4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from vhrvd.dynamics import ScenarioScales

RK4_SUBSTEPS_PER_PERIOD = 1000


class SpinVariant(enum.Enum):
    CONSTANT_RTN_RATE = "constant_rtn_rate"
    INERTIALLY_FIXED_AXIS = "inertially_fixed_axis"


@dataclass(frozen=True)
class SpinModel:
    variant: SpinVariant
    omega0: np.ndarray  # rad/s, RTN, at t0

    def __post_init__(self):
        object.__setattr__(self, "variant", SpinVariant(self.variant))
        w = np.asarray(self.omega0, dtype=float).reshape(3)
        if not np.isfinite(w).all():
            raise ValueError("omega0 must be finite")
        object.__setattr__(self, "omega0", w)

    @property
    def rate(self) -> float:
        return float(np.linalg.norm(self.omega0))


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Right-handed rotation by ``angle`` about ``axis`` (Rodrigues formula)."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    K = np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def precession(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def omega_at(model: SpinModel, t: float, t0: float, eta: float) -> np.ndarray:
    """Angular velocity of the target body relative to RTN at time ``t``."""
    if model.variant is SpinVariant.CONSTANT_RTN_RATE:
        return model.omega0.copy()
    return precession(eta * (t - t0)) @ model.omega0


@dataclass(frozen=True)
class DockingPointState:
    p_d: np.ndarray  # m
    v_d: np.ndarray  # m/s


def _rk4(p, t, t_end, model, t0, eta, h_max):
    span = t_end - t
    n = max(1, math.ceil(span / h_max - 1e-12))
    h = span / n
    for _ in range(n):
        k1 = np.cross(omega_at(model, t, t0, eta), p)
        k2 = np.cross(omega_at(model, t + h / 2, t0, eta), p + h / 2 * k1)
        k3 = np.cross(omega_at(model, t + h / 2, t0, eta), p + h / 2 * k2)
        k4 = np.cross(omega_at(model, t + h, t0, eta), p + h * k3)
        p = p + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
    return p


def _substep(model: SpinModel) -> float:
    rate = model.rate
    if rate == 0.0:
        return math.inf
    return (2 * math.pi / rate) / RK4_SUBSTEPS_PER_PERIOD


def docking_track(p0, model: SpinModel, t0: float, times, eta: float) -> np.ndarray:
    """Docking-point positions at the ascending ``times`` (all ``>= t0``)."""
    p0 = np.asarray(p0, dtype=float).reshape(3)
    r0 = np.linalg.norm(p0)
    if r0 == 0.0:
        raise ValueError("docking point must not coincide with the target centre of mass")
    times = np.asarray(times, dtype=float)
    out = np.empty((times.size, 3))
    if model.variant is SpinVariant.CONSTANT_RTN_RATE or model.rate == 0.0:
        w = model.omega0
        rate = np.linalg.norm(w)
        for i, t in enumerate(times):
            out[i] = p0 if rate == 0.0 else rotation_matrix(w, rate * (t - t0)) @ p0
        return out
    h_max = _substep(model)
    p, t = p0.copy(), t0
    for i, ti in enumerate(times):
        if ti < t - 1e-12:
            raise ValueError("times must be ascending and not before t0")
        if ti > t:
            p = _rk4(p, t, ti, model, t0, eta, h_max)
            p *= r0 / np.linalg.norm(p)
            t = ti
        out[i] = p
    return out


def propagate_docking_point(p0, model: SpinModel, t0: float, t: float, eta: float) -> DockingPointState:
    if t < t0:
        raise ValueError("t must not precede t0")
    p = docking_track(p0, model, t0, [t], eta)[0]
    return DockingPointState(p, np.cross(omega_at(model, t, t0, eta), p))


@dataclass(frozen=True)
class ReferenceTrajectory:
    """Normalized docking-point states for ``k = k0..k0+N_ub``.

    ``states[i]`` is the sample at ``k = k0 + i``.
    """

    states: np.ndarray
    scales: ScenarioScales
    positions_m: np.ndarray
    velocities_mps: np.ndarray

    @property
    def N_ub(self) -> int:
        return self.states.shape[0] - 1

    def at(self, k: int) -> np.ndarray:
        i = k - self.scales.k0
        if not 0 <= i < self.states.shape[0]:
            raise IndexError(f"reference does not cover k={k}")
        return self.states[i]


def build_reference(p0, model: SpinModel, scales: ScenarioScales, N_ub: int) -> ReferenceTrajectory:
    if N_ub < 1:
        raise ValueError("N_ub must be at least 1")
    ks = scales.k0 + np.arange(N_ub + 1)
    times = np.array([scales.time_of(k) for k in ks])
    P = docking_track(p0, model, scales.t0, times, scales.eta)
    V = np.array([np.cross(omega_at(model, t, scales.t0, scales.eta), p) for t, p in zip(times, P)])
    X = np.hstack([scales.position_scale * P, scales.velocity_scale * V])
    for arr in (X, P, V):
        arr.setflags(write=False)
    return ReferenceTrajectory(X, scales, P, V)
