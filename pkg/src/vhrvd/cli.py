"""Command-line driver: ``vhrvd plan|sweep|compare|propagate --config FILE``.

All files written are CSV with 17 significant digits. Exit codes: 0 success
(or planned), 2 plan infeasible, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from vhrvd.constraints import phase_of
from vhrvd.dynamics import ReachabilityTable, denormalize, discretize
from vhrvd.lp import _backend
from vhrvd.scenario import ScenarioConfig, ScenarioError, load_scenario
from vhrvd.search import (
    PlanStatus,
    binary_search_baseline,
    enumerate_all,
    feasible_set,
    plan,
)

log = logging.getLogger("vhrvd")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

PLAN_COLUMNS = ["k", "t_s", "pR_m", "pT_m", "pN_m", "vR_mps", "vT_mps", "vN_mps",
                "aR_mps2", "aT_mps2", "aN_mps2", "phase"]
PROFILE_COLUMNS = ["N", "feasible", "J", "fuel"]
COMPARE_COLUMNS = ["gamma", "N_star", "N_hat", "N_bs", "J_star", "J_hat", "J_bs",
                   "fuel_star", "fuel_hat", "fuel_bs", "wall_ms_star", "wall_ms_hat", "wall_ms_bs",
                   "N1", "lps_hat", "probes_bs"]
REFERENCE_COLUMNS = ["k", "t_s", "pR_m", "pT_m", "pN_m", "vR_mps", "vT_mps", "vN_mps", "p_norm_m",
                     "xR", "xT", "xN", "xvR", "xvT", "xvN"]


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_csv(path: Path, columns, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def parse_gamma_grid(text: str):
    """``a:b:step`` (inclusive) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"gamma grid {text!r}: expected a:b:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValueError(f"gamma grid {text!r}: need step > 0 and b >= a")
        n = int(math.floor((b - a) / step + 1e-9)) + 1
        return [a + i * step for i in range(n)]
    return [float(p) for p in text.split(",") if p.strip()]


def plan_rows(cfg: ScenarioConfig, result):
    sol = result.solution
    scales = cfg.scales
    rows = []
    N = sol.N
    for i in range(N + 1):
        k = cfg.k0 + i
        phys = denormalize(sol.states[i], scales)
        acc = sol.u[i] * cfg.a_max if i < N else [None, None, None]
        rows.append([k, scales.time_of(k), *phys.p, *phys.v, *acc, phase_of(k, N, cfg.k0, cfg.N_d)])
    return rows


def cmd_plan(cfg: ScenarioConfig, out: Path) -> int:
    problem = cfg.build()
    F = feasible_set(problem.table, problem.x0, problem.reference, cfg.k0, cfg.N_ub, cfg.membership_tol)
    result = plan(problem, F)
    if result.status is PlanStatus.INFEASIBLE:
        print(f"status=infeasible lps_solved={result.lps_solved} F_size={result.F_size} "
              f"wall_ms={result.wall_s * 1e3:.1f}")
        return EXIT_INFEASIBLE
    write_csv(out / "plan.csv", PLAN_COLUMNS, plan_rows(cfg, result))
    print(f"status=planned N_hat={result.N_hat} J={result.J:.6f} fuel={result.fuel:.6f} "
          f"lps_solved={result.lps_solved} wall_ms={result.wall_s * 1e3:.1f}")
    return EXIT_OK


def cmd_sweep(cfg: ScenarioConfig, out: Path, workers: int = 1) -> int:
    problem = cfg.build()
    en = enumerate_all(problem, workers=workers)
    rows = [[N, s.feasible, s.J, s.fuel] for N, s in sorted(en.solutions.items())]
    write_csv(out / "profile.csv", PROFILE_COLUMNS, rows)
    print(f"N_star={en.N_star} J_star={en.J_star:.6f} wall_ms={en.wall_s * 1e3:.1f}")
    return EXIT_OK


def cmd_compare(cfg: ScenarioConfig, out: Path, gammas, workers: int = 1) -> int:
    model = discretize(cfg.tau_s)
    table = ReachabilityTable(model, cfg.N_ub)
    reference = cfg.reference()
    base = cfg.build(reference=reference, table=table)
    F = feasible_set(table, base.x0, reference, cfg.k0, cfg.N_ub, cfg.membership_tol)
    rows = []
    for g in gammas:
        problem = cfg.with_overrides(gamma=g).build(reference=reference, table=table)
        en = enumerate_all(problem, workers=workers)
        t = time.perf_counter()
        res = plan(problem, F)
        wall_hat = time.perf_counter() - t
        bs = binary_search_baseline(problem)
        rows.append([g, en.N_star, res.N_hat, bs.N_bs, en.J_star, res.J, bs.J,
                     en.solutions[en.N_star].fuel if en.N_star else math.inf, res.fuel,
                     bs.solution.fuel if bs.solution else math.inf,
                     en.wall_s * 1e3, wall_hat * 1e3, bs.wall_s * 1e3,
                     res.N1, res.lps_solved, bs.probes])
        log.info("gamma=%g N*=%s N_hat=%s N_bs=%s", g, en.N_star, res.N_hat, bs.N_bs)
    write_csv(out / "compare.csv", COMPARE_COLUMNS, rows)
    print(f"compare: {len(rows)} gamma values written to {out / 'compare.csv'}")
    return EXIT_OK


def cmd_propagate(cfg: ScenarioConfig, out: Path, horizon: int | None = None) -> int:
    horizon = cfg.N_ub if horizon is None else horizon
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    ref = cfg.reference(horizon)
    rows = []
    for i in range(horizon + 1):
        k = cfg.k0 + i
        p, v = ref.positions_m[i], ref.velocities_mps[i]
        rows.append([k, cfg.scales.time_of(k), *p, *v, np.linalg.norm(p), *ref.states[i]])
    write_csv(out / "reference.csv", REFERENCE_COLUMNS, rows)
    print(f"reference: {horizon + 1} samples written to {out / 'reference.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vhrvd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("plan", "sweep", "compare", "propagate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="scenario JSON file or bundled name (table1, envisat_p1, envisat_p2)")
        p.add_argument("--gamma", type=float, help="override the scenario fuel weight")
        p.add_argument("--n-ub", type=int, dest="n_ub", help="override the horizon upper bound")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="LP solves run concurrently in sweeps (default: CPU count)")
        if name == "compare":
            p.add_argument("--gamma-grid", default="1:15:1", dest="gamma_grid",
                           help="a:b:step inclusive, or comma list (default 1:15:1)")
        if name == "propagate":
            p.add_argument("--horizon", type=int, help="samples to emit (default: N_ub)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    log.info("pivot kernel: %s", _backend.NAME)
    try:
        if args.n_ub is not None and args.n_ub < 1:
            raise ScenarioError("n-ub: horizon must be at least 1")
        cfg = load_scenario(args.config).with_overrides(gamma=args.gamma, N_ub=args.n_ub)
        out = Path(args.out)
        if args.command == "plan":
            return cmd_plan(cfg, out)
        if args.command == "sweep":
            return cmd_sweep(cfg, out, args.workers)
        if args.command == "compare":
            return cmd_compare(cfg, out, parse_gamma_grid(args.gamma_grid), args.workers)
        return cmd_propagate(cfg, out, args.horizon)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
