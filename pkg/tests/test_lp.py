import numpy as np
import pytest
from scipy.optimize import linprog

from flexsky.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, linprog_max


def test_simple_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog_max([1, 1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(2.8)
    np.testing.assert_allclose(res.x, [1.6, 1.2], atol=1e-9)
    np.testing.assert_allclose(res.duals, [0.4, 0.2], atol=1e-9)


def test_infeasible_and_unbounded():
    assert linprog_max([1, 0], A_ub=[[1, 1]], b_ub=[-1]).status == INFEASIBLE
    assert linprog_max([1, 1], A_ub=[[1, -1]], b_ub=[1]).status == UNBOUNDED


def test_equality_rows():
    res = linprog_max([1, 2, 0], A_eq=[[1, 1, 1]], b_eq=[1], A_ub=[[0, 1, 0]], b_ub=[0.25])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(1.25)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        linprog_max([1, 1], A_ub=[[1, 1, 1]], b_ub=[1])


@pytest.mark.parametrize("seed", range(60))
def test_matches_scipy_on_random_lps(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(2, 7), rng.integers(1, 9)
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m) + 0.5
    c = rng.normal(size=n)
    eq = rng.random() < 0.5
    A_eq, b_eq = (np.ones((1, n)), [1.0]) if eq else (None, None)
    ours = linprog_max(c, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=b_eq)
    ref = linprog(-c, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
    expected = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
    assert ours.status == expected
    if expected == OPTIMAL:
        assert ours.objective == pytest.approx(-ref.fun, abs=1e-7)
        assert np.all(A @ ours.x <= b + 1e-7)
        assert np.all(ours.x >= -1e-9)
        if not eq:
            # strong duality: b . y equals the primal optimum
            assert b @ ours.duals == pytest.approx(ours.objective, abs=1e-7)
            np.testing.assert_allclose(ours.duals, -ref.ineqlin.marginals, atol=1e-6)
