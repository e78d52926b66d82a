import numpy as np
import pytest
from scipy.optimize import linprog

from rltqp.core.errors import DimensionMismatch
from rltqp.lp.certificate import verify_certificate
from rltqp.lp.problem import LpOutcome, LpProblem, LpStatus
from rltqp.lp.simplex import clip_round_off, solve_lp


def test_small_optimal_lp():
    # min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0
    lp = LpProblem.build([-1.0, -1.0], ineq_lhs=[[1.0, 2.0], [3.0, 1.0]], ineq_rhs=[4.0, 6.0],
                         lower_bounds=[0.0, 0.0])
    outcome = solve_lp(lp)
    assert outcome.status == LpStatus.OPTIMAL
    assert outcome.objective_value == pytest.approx(-2.8)
    assert np.allclose(outcome.primal, [1.6, 1.2])
    assert outcome.dual_value(lp) == pytest.approx(-2.8)
    assert verify_certificate(lp, outcome)


def test_free_variables_with_equalities():
    # min x + y  s.t. x - y = 1, -x <= 3, y free
    lp = LpProblem.build([1.0, 1.0], eq_lhs=[[1.0, -1.0]], eq_rhs=[1.0], ineq_lhs=[[-1.0, 0.0]], ineq_rhs=[3.0])
    outcome = solve_lp(lp)
    assert outcome.status == LpStatus.OPTIMAL
    assert np.allclose(outcome.primal, [-3.0, -4.0])
    assert verify_certificate(lp, outcome)


def test_infeasible_lp_has_farkas_multipliers():
    lp = LpProblem.build([1.0], ineq_lhs=[[1.0], [-1.0]], ineq_rhs=[-1.0, -1.0])
    outcome = solve_lp(lp)
    assert outcome.status == LpStatus.INFEASIBLE
    assert outcome.dual_value(lp) > 0
    assert verify_certificate(lp, outcome)


def test_unbounded_lp_has_ray():
    lp = LpProblem.build([-1.0, 0.0], ineq_lhs=[[0.0, 1.0]], ineq_rhs=[1.0], lower_bounds=[0.0, 0.0])
    outcome = solve_lp(lp)
    assert outcome.status == LpStatus.UNBOUNDED
    assert lp.objective @ outcome.ray < 0
    assert np.max(np.abs(outcome.ray)) == pytest.approx(1.0)
    assert verify_certificate(lp, outcome)


def test_degenerate_lp_terminates():
    # several constraints through the optimal vertex
    A = np.array([[1.0, 1.0], [1.0, 0.0], [0.0, 1.0], [2.0, 1.0], [1.0, 2.0]])
    b = np.array([1.0, 1.0, 1.0, 2.0, 2.0])
    lp = LpProblem.build([-1.0, -1.0], ineq_lhs=A, ineq_rhs=b, lower_bounds=[0.0, 0.0])
    outcome = solve_lp(lp)
    assert outcome.status == LpStatus.OPTIMAL
    assert outcome.objective_value == pytest.approx(-1.0)
    assert verify_certificate(lp, outcome)


def test_tampered_certificate_is_rejected():
    lp = LpProblem.build([-1.0, -1.0], ineq_lhs=[[1.0, 2.0], [3.0, 1.0]], ineq_rhs=[4.0, 6.0],
                         lower_bounds=[0.0, 0.0])
    outcome = solve_lp(lp)
    forged = LpOutcome(status=outcome.status, primal=outcome.primal, objective_value=outcome.objective_value,
                       dual_eq=outcome.dual_eq, dual_ineq=outcome.dual_ineq * 2.0,
                       reduced_costs=outcome.reduced_costs)
    check = verify_certificate(lp, forged)
    assert not check
    assert "dual feasibility" in check.reasons


def test_negative_inequality_dual_is_a_sign_violation():
    lp = LpProblem.build([-1.0, -1.0], ineq_lhs=[[1.0, 2.0], [3.0, 1.0]], ineq_rhs=[4.0, 6.0],
                         lower_bounds=[0.0, 0.0])
    outcome = solve_lp(lp)
    dual_ineq = outcome.dual_ineq.copy()
    dual_ineq[0] = -1.0
    forged = LpOutcome(status=outcome.status, primal=outcome.primal, objective_value=outcome.objective_value,
                       dual_eq=outcome.dual_eq, dual_ineq=dual_ineq, reduced_costs=outcome.reduced_costs)
    check = verify_certificate(lp, forged)
    assert not check
    assert "dual sign" in check.reasons


def test_only_round_off_is_clipped(caplog):
    assert np.array_equal(clip_round_off(np.array([-1e-13, 1.0]), "x"), [0.0, 1.0])
    kept = clip_round_off(np.array([-0.5, 1.0]), "x")
    assert kept[0] == -0.5
    assert "leaving them for the certificate check" in caplog.text


def test_shape_mismatch_raises():
    with pytest.raises(DimensionMismatch):
        LpProblem(objective=np.zeros(2), eq_lhs=np.zeros((1, 3)), eq_rhs=np.zeros(1),
                  ineq_lhs=np.zeros((0, 2)), ineq_rhs=np.zeros(0), lower_bounds=np.zeros(2))


@pytest.mark.parametrize("seed", range(15))
def test_matches_linprog_on_random_lps(seed):
    rng = np.random.default_rng(seed)
    n, m, k = 4, 6, 2
    A_in = rng.normal(size=(m, n))
    x0 = rng.uniform(0.0, 1.0, size=n)
    b_in = A_in @ x0 + rng.uniform(0.1, 1.0, size=m)
    A_eq = rng.normal(size=(k, n))
    b_eq = A_eq @ x0
    cost = rng.normal(size=n)
    # keep the problem bounded
    A_in = np.vstack([A_in, np.eye(n)])
    b_in = np.concatenate([b_in, np.full(n, 5.0)])

    lp = LpProblem.build(cost, A_eq, b_eq, A_in, b_in, lower_bounds=np.zeros(n))
    outcome = solve_lp(lp)
    reference = linprog(cost, A_ub=A_in, b_ub=b_in, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
    assert outcome.status == LpStatus.OPTIMAL
    assert outcome.objective_value == pytest.approx(reference.fun, abs=1e-7)
    assert verify_certificate(lp, outcome)
