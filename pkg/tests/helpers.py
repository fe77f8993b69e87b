"""Shared setup for the test-suite and the acceptance script: bundled
scenarios built once, and a brute-force LP oracle."""

import itertools

import numpy as np

from vhrvd.dynamics import ReachabilityTable, discretize
from vhrvd.lp import LpProblem
from vhrvd.scenario import load_scenario
from vhrvd.search import enumerate_all, feasible_set


class Bundle:
    """A bundled scenario with its tables, reference and pruned set built once."""

    def __init__(self, name):
        self.cfg = load_scenario(name)
        self.model = discretize(self.cfg.tau_s)
        self.table = ReachabilityTable(self.model, self.cfg.N_ub)
        self.reference = self.cfg.reference()
        self.problem = self.problem_for(self.cfg.gamma)
        self.F = feasible_set(self.table, self.problem.x0, self.reference, self.cfg.k0,
                              self.cfg.N_ub, self.cfg.membership_tol)
        self._enum = {}

    def problem_for(self, gamma, formulation="split"):
        return self.cfg.with_overrides(gamma=gamma).build(self.reference, self.table, formulation)

    def enumeration(self, gamma):
        if gamma not in self._enum:
            self._enum[gamma] = enumerate_all(self.problem_for(gamma))
        return self._enum[gamma]


def vertex_oracle(p: LpProblem):
    """Brute force over every choice of ``n`` active constraints.

    Returns the best objective among feasible vertices, or ``None`` when no
    vertex is feasible. Only valid for problems with a bounded feasible set.
    """
    n = p.n_vars
    rows, rhs = [p.A_ub], [p.b_ub]
    fin_lb, fin_ub = np.isfinite(p.lb), np.isfinite(p.ub)
    rows += [-np.eye(n)[fin_lb], np.eye(n)[fin_ub]]
    rhs += [-p.lb[fin_lb], p.ub[fin_ub]]
    G, h = np.vstack(rows), np.concatenate(rhs)
    # independent basis of the equality rows; consistency is re-checked below
    A_eq, b_eq = p.A_eq, p.b_eq
    if b_eq.size:
        U, sv, Vt = np.linalg.svd(A_eq, full_matrices=False)
        rank = int(np.sum(sv > 1e-10 * sv[0])) if sv[0] > 0 else 0
        A_eq, b_eq = Vt[:rank], (U[:, :rank].T @ b_eq) / sv[:rank]
    m_eq = b_eq.size
    k = n - m_eq
    combos = np.array(list(itertools.combinations(range(G.shape[0]), k)), dtype=int)
    combos = combos.reshape(len(combos), k)
    M = np.concatenate([np.broadcast_to(A_eq, (len(combos), m_eq, n)), G[combos]], axis=1)
    r = np.concatenate([np.broadcast_to(b_eq, (len(combos), m_eq)), h[combos]], axis=1)
    ok = np.abs(np.linalg.det(M)) > 1e-10
    if not ok.any():
        return None
    z = np.linalg.solve(M[ok], r[ok][..., None])[..., 0]
    viol = np.max(np.concatenate([
        (z @ G.T - h).reshape(len(z), -1),
        np.abs(z @ p.A_eq.T - p.b_eq).reshape(len(z), -1),
        np.zeros((len(z), 1)),
    ], axis=1), axis=1)
    feas = viol <= 1e-9
    if not feas.any():
        return None
    return float(np.min(z[feas] @ p.c))


def random_lp(rng, bounded=True):
    n = int(rng.integers(1, 9))
    m_ub = int(rng.integers(0, 9))
    m_eq = int(rng.integers(0, min(n, 12 - m_ub) + 1)) if rng.random() < 0.5 else 0
    if rng.random() < 0.3:
        # small integers produce degenerate vertices
        A_ub = rng.integers(-3, 4, size=(m_ub, n)).astype(float)
        b_ub = rng.integers(-2, 5, size=m_ub).astype(float)
        A_eq = rng.integers(-2, 3, size=(m_eq, n)).astype(float)
        c = rng.integers(-3, 4, size=n).astype(float)
    else:
        A_ub = rng.normal(size=(m_ub, n))
        b_ub = rng.normal(size=m_ub) + 0.5
        A_eq = rng.normal(size=(m_eq, n))
        c = rng.normal(size=n)
    lb = rng.uniform(-2, 0, size=n)
    ub = lb + rng.uniform(0.5, 3, size=n) if bounded else np.full(n, np.inf)
    interior = rng.uniform(lb, lb + 1)
    b_eq = A_eq @ interior if rng.random() < 0.8 else rng.normal(size=m_eq)
    return LpProblem(c, A_ub, b_ub, A_eq, b_eq, lb, ub)


def small_lps(count, seed, max_vars=6):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_lp(rng)
        if p.n_vars <= max_vars:
            out.append(p)
    return out
