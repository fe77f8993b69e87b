import numpy as np
import pytest

from helpers import small_lps, vertex_oracle
from vhrvd.lp import LpProblem, LpStatus, _backend, check_feasible, io, solve

ORACLE_TOL = 1e-7


LPS = small_lps(200, 7)


@pytest.fixture(params=["cython", "python"])
def kernel(request):
    if request.param == "cython" and _backend.run_pivots_c is None:
        pytest.skip("compiled kernel not built")
    previous = _backend.NAME
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


def test_two_variable_example(kernel):
    s = solve(LpProblem(c=[-1, -2], A_ub=[[1, 1]], b_ub=[1]))
    assert s.status is LpStatus.OPTIMAL
    assert np.allclose(s.z, [0, 1]) and s.objective == pytest.approx(-2)


def test_infeasible_example(kernel):
    p = LpProblem(c=[1.0], A_ub=[[1.0]], b_ub=[-1.0])
    assert solve(p).status is LpStatus.INFEASIBLE
    assert check_feasible(p) is False


def test_empty_constraints_feasible():
    assert check_feasible(LpProblem(c=[1.0, 2.0])) is True
    s = solve(LpProblem(c=[1.0, 2.0]))
    assert s.optimal and s.objective == 0


def test_unbounded():
    s = solve(LpProblem(c=[-1.0, 0.0], A_ub=[[0.0, 1.0]], b_ub=[1.0]))
    assert s.status is LpStatus.UNBOUNDED


def test_free_and_negative_variables():
    # min x - y with x free in [-5, inf), y <= 2 only
    p = LpProblem(c=[1.0, -1.0], A_ub=[[-1.0, 0.0]], b_ub=[3.0], lb=[-np.inf, -np.inf], ub=[np.inf, 2.0])
    s = solve(p)
    assert s.optimal and np.allclose(s.z, [-3, 2]) and s.objective == pytest.approx(-5)


@pytest.mark.parametrize("rule", ["dantzig", "bland"])
def test_random_vs_vertex_oracle(kernel, rule):
    for i, p in enumerate(LPS):
        ref = vertex_oracle(p)
        s = solve(p, rule=rule)
        if ref is None:
            assert s.status is LpStatus.INFEASIBLE, i
        else:
            assert s.status is LpStatus.OPTIMAL, i
            assert abs(s.objective - ref) <= ORACLE_TOL * max(1.0, abs(ref)), i
            assert s.max_violation <= 1e-8, i


def test_check_feasible_agrees_with_solve():
    for p in LPS:
        assert check_feasible(p) == (solve(p).status is LpStatus.OPTIMAL)


def test_duals_certify_optimality():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 100:
        n, m_ub, m_eq = int(rng.integers(2, 8)), int(rng.integers(1, 8)), int(rng.integers(0, 3))
        A_ub, A_eq = rng.normal(size=(m_ub, n)), rng.normal(size=(m_eq, n))
        z0 = rng.uniform(0, 1, size=n)
        p = LpProblem(rng.uniform(0.1, 2, size=n), A_ub, A_ub @ z0 + 0.1, A_eq, A_eq @ z0)
        s = solve(p)
        assert s.optimal
        assert np.all(s.y_ub <= 1e-9)
        reduced = p.c - p.A_ub.T @ s.y_ub - p.A_eq.T @ s.y_eq
        assert np.all(reduced >= -1e-8)
        dual_obj = p.b_ub @ s.y_ub + p.b_eq @ s.y_eq
        assert dual_obj == pytest.approx(s.objective, abs=1e-8 * max(1, abs(s.objective)))
        checked += 1


def test_deterministic():
    for p in LPS[:30]:
        a, b = solve(p), solve(p)
        assert a.status is b.status and a.iterations == b.iterations
        if a.optimal:
            assert np.array_equal(a.z, b.z)


def test_cost_scaling_invariance():
    for p in LPS[:60]:
        s = solve(p)
        if not s.optimal:
            continue
        q = LpProblem(p.c * 7.5, p.A_ub, p.b_ub, p.A_eq, p.b_eq, p.lb, p.ub)
        assert solve(q).objective == pytest.approx(7.5 * s.objective, rel=1e-9, abs=1e-9)


def test_kernels_agree():
    if _backend.run_pivots_c is None:
        pytest.skip("compiled kernel not built")
    previous = _backend.NAME
    try:
        for p in LPS[:80]:
            _backend.use("cython")
            a = solve(p)
            _backend.use("python")
            b = solve(p)
            assert a.status is b.status and a.iterations == b.iterations
            if a.optimal:
                assert np.allclose(a.z, b.z, atol=1e-12)
    finally:
        _backend.use(previous)


def test_iteration_limit():
    p = LPS[next(i for i, q in enumerate(LPS) if solve(q).iterations > 2)]
    assert solve(p, max_iter=1).status is LpStatus.ITERATION_LIMIT


def test_problem_validation():
    with pytest.raises(ValueError):
        LpProblem(c=[1, 2], A_ub=[[1, 2, 3]], b_ub=[1])
    with pytest.raises(ValueError):
        LpProblem(c=[np.nan])
    with pytest.raises(ValueError):
        LpProblem(c=[1.0], lb=[np.inf])


def test_dump_round_trip(tmp_path):
    for p in LPS[:20]:
        path = tmp_path / "lp.txt"
        io.dump(p, path)
        q = io.load(path)
        for name in io.SECTIONS:
            assert np.array_equal(getattr(p, name), getattr(q, name))


def test_dump_rejects_garbage():
    with pytest.raises(ValueError):
        io.loads("something else\n")
    with pytest.raises(ValueError):
        io.loads(io.HEADER + "\n[c] 1 1\n1.0\n")
