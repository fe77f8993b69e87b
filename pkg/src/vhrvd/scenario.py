"""Scenario files: SI parameters of a maneuver plus solver settings.

A scenario is a JSON object. Required keys (SI units, RTN components)::

    eta             target mean motion, rad/s
    a_max           max acceleration per RTN axis, m/s^2
    tau_s           sampling interval in scaled time, rad/sample
    p0_docking      docking point at t0 relative to the target CoM, m
    spin            {"variant": "constant_rtn_rate" | "inertially_fixed_axis",
                     "omega0": [wR, wT, wN]}  rad/s
    p0_rel          initial chaser position, m
    v0_rel          initial chaser velocity, m/s
    alpha_deg       docking cone half-angle, deg
    keepout_radius  keep-out sphere radius, m
    N_d             docking-phase steps
    gamma           fuel weight
    N_ub            largest horizon considered

Optional: ``name``, ``k0`` (0), ``t0`` (0.0) and ``tolerances`` with any of
``feas_tol``, ``opt_tol``, ``membership_tol``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from vhrvd.constraints import ConstraintScheduleParams
from vhrvd.dynamics import (
    PhysicalRelativeState,
    ReachabilityTable,
    ScenarioScales,
    discretize,
    normalize,
)
from vhrvd.target_motion import SpinModel, SpinVariant, build_reference
from vhrvd.transcription import HorizonProblem

REQUIRED = ("eta", "a_max", "tau_s", "p0_docking", "spin", "p0_rel", "v0_rel", "alpha_deg",
            "keepout_radius", "N_d", "gamma", "N_ub")
TOLERANCE_KEYS = ("feas_tol", "opt_tol", "membership_tol")
BUNDLED = ("table1", "envisat_p1", "envisat_p2")


class ScenarioError(ValueError):
    """Invalid scenario file; the message names the offending field."""


@dataclass(frozen=True)
class ScenarioConfig:
    eta: float
    a_max: float
    tau_s: float
    p0_docking: np.ndarray
    spin: SpinModel
    p0_rel: np.ndarray
    v0_rel: np.ndarray
    alpha_deg: float
    keepout_radius: float
    N_d: int
    gamma: float
    N_ub: int
    k0: int = 0
    t0: float = 0.0
    tolerances: dict = field(default_factory=dict)
    name: str = ""

    @property
    def scales(self) -> ScenarioScales:
        return ScenarioScales(self.eta, self.a_max, self.tau_s, self.k0, self.t0)

    @property
    def x0(self) -> np.ndarray:
        return normalize(PhysicalRelativeState(self.p0_rel, self.v0_rel), self.scales)

    @property
    def r_normalized(self) -> float:
        return self.keepout_radius * self.scales.position_scale

    @property
    def schedule_params(self) -> ConstraintScheduleParams:
        return ConstraintScheduleParams(self.r_normalized, math.radians(self.alpha_deg), self.N_d)

    def lp_options(self) -> dict:
        return {k: v for k, v in self.tolerances.items() if k in ("feas_tol", "opt_tol")}

    @property
    def membership_tol(self) -> float:
        return self.tolerances.get("membership_tol", 1e-7)

    def with_overrides(self, gamma=None, N_ub=None) -> "ScenarioConfig":
        cfg = self
        if gamma is not None:
            cfg = replace(cfg, gamma=float(gamma))
        if N_ub is not None:
            cfg = replace(cfg, N_ub=int(N_ub))
        _validate(cfg)
        return cfg

    def reference(self, N_ub=None):
        return build_reference(self.p0_docking, self.spin, self.scales, N_ub or self.N_ub)

    def build(self, reference=None, table=None, formulation="split") -> HorizonProblem:
        """Fixed-horizon problem factory for this scenario."""
        model = discretize(self.tau_s)
        table = table or ReachabilityTable(model, self.N_ub)
        reference = reference or self.reference()
        return HorizonProblem(model, table, reference, self.schedule_params, self.x0, self.gamma,
                              formulation=formulation, lp_options=self.lp_options())


def _vector(raw, key):
    try:
        v = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError(f"{key}: expected a list of 3 numbers") from None
    if v.shape != (3,):
        raise ScenarioError(f"{key}: expected a list of 3 numbers")
    if not np.isfinite(v).all():
        raise ScenarioError(f"{key}: non-finite value")
    return v


def _number(raw, key):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioError(f"{key}: expected a number")
    if not math.isfinite(raw):
        raise ScenarioError(f"{key}: non-finite value")
    return float(raw)


def _integer(raw, key):
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ScenarioError(f"{key}: expected an integer")
    return raw


def _validate(cfg: ScenarioConfig):
    for key in ("eta", "a_max", "tau_s", "keepout_radius"):
        if not getattr(cfg, key) > 0:
            raise ScenarioError(f"{key}: must be positive")
    if not 0 < cfg.alpha_deg < 90:
        raise ScenarioError("alpha_deg: must lie in (0, 90)")
    if cfg.gamma < 0:
        raise ScenarioError("gamma: must be non-negative")
    if cfg.N_ub < 1:
        raise ScenarioError("N_ub: must be at least 1")
    if cfg.N_d < 1:
        raise ScenarioError("N_d: must be at least 1")
    if cfg.N_d >= cfg.N_ub:
        raise ScenarioError("N_d: must be smaller than N_ub")
    if cfg.k0 < 0:
        raise ScenarioError("k0: must be non-negative")
    if np.linalg.norm(cfg.p0_docking) == 0:
        raise ScenarioError("p0_docking: must be nonzero")
    if not cfg.keepout_radius < np.linalg.norm(cfg.p0_rel):
        raise ScenarioError("keepout_radius: initial position lies inside the keep-out zone")
    for key, val in cfg.tolerances.items():
        if key not in TOLERANCE_KEYS:
            raise ScenarioError(f"tolerances.{key}: unknown tolerance")
        if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
            raise ScenarioError(f"tolerances.{key}: must be a positive number")


def parse_scenario(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ScenarioError("scenario: expected a JSON object")
    for key in REQUIRED:
        if key not in data:
            raise ScenarioError(f"{key}: missing required key")
    spin = data["spin"]
    if not isinstance(spin, dict):
        raise ScenarioError("spin: expected an object with 'variant' and 'omega0'")
    for key in ("variant", "omega0"):
        if key not in spin:
            raise ScenarioError(f"spin.{key}: missing required key")
    try:
        variant = SpinVariant(spin["variant"])
    except ValueError:
        raise ScenarioError(f"spin.variant: unknown variant {spin['variant']!r}") from None
    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ScenarioError("tolerances: expected an object")

    cfg = ScenarioConfig(
        eta=_number(data["eta"], "eta"),
        a_max=_number(data["a_max"], "a_max"),
        tau_s=_number(data["tau_s"], "tau_s"),
        p0_docking=_vector(data["p0_docking"], "p0_docking"),
        spin=SpinModel(variant, _vector(spin["omega0"], "spin.omega0")),
        p0_rel=_vector(data["p0_rel"], "p0_rel"),
        v0_rel=_vector(data["v0_rel"], "v0_rel"),
        alpha_deg=_number(data["alpha_deg"], "alpha_deg"),
        keepout_radius=_number(data["keepout_radius"], "keepout_radius"),
        N_d=_integer(data["N_d"], "N_d"),
        gamma=_number(data["gamma"], "gamma"),
        N_ub=_integer(data["N_ub"], "N_ub"),
        k0=_integer(data.get("k0", 0), "k0"),
        t0=_number(data.get("t0", 0.0), "t0"),
        tolerances=dict(tolerances),
        name=str(data.get("name", "")),
    )
    _validate(cfg)
    return cfg


def load_scenario(path) -> ScenarioConfig:
    """Read and validate a scenario file.

    ``path`` may also be the name of a bundled scenario (``table1``,
    ``envisat_p1``, ``envisat_p2``).
    """
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        text = resources.files("vhrvd").joinpath("data", f"{path}.json").read_text()
    else:
        try:
            text = p.read_text()
        except OSError as exc:
            raise ScenarioError(f"scenario: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario: invalid JSON ({exc})") from None
    return parse_scenario(data)


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("vhrvd").joinpath("data", f"{name}.json")))
