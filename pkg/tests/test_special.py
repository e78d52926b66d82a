import time

import numpy as np
import pytest

from rltqp.core.errors import DimensionMismatch, InvalidWeights
from rltqp.oracle.global_qp import OracleStatus, global_min_qp
from rltqp.relaxation.builder import solve_rlt
from rltqp.relaxation.instance import QpInstance
from rltqp.special.qpa import bound_sandwich, build_qpa, face_upper_bound
from rltqp.special.specific import (
    SpecificClassInstance, pairwise_bound, specific_bound, specific_vertices, stqp_bound,
    structural_lifted_vertices,
)

from .conftest import random_polytope, random_symmetric, strip, unit_box


def test_weights_validation():
    with pytest.raises(InvalidWeights):
        SpecificClassInstance(Q=np.eye(2), c=np.zeros(2), a=[1.0, -1.0])
    with pytest.raises(InvalidWeights):
        specific_vertices([0.0, 0.0])
    with pytest.raises(DimensionMismatch):
        SpecificClassInstance(Q=np.eye(3), c=np.zeros(2), a=[1.0, 1.0])


def test_specific_vertices_skip_zero_weights():
    vertices = specific_vertices([2.0, 0.0, 4.0])
    assert np.allclose(vertices, [[0.5, 0.0, 0.0], [0.0, 0.0, 0.25]])
    assert len(structural_lifted_vertices([2.0, 0.0, 4.0])) == 3


def test_stqp_closed_form_by_hand():
    Q = np.array([[2.0, -4.0], [-4.0, 6.0]])
    c = np.array([0.0, 1.0])
    # ½Q₁₁ + c₁ = 1, ½Q₂₂ + c₂ = 4, ½(Q₁₂ + c₁ + c₂) = −1.5
    assert stqp_bound(Q, c) == pytest.approx(-1.5)


@pytest.mark.parametrize("seed", range(50))
def test_stqp_closed_form_matches_relaxation(seed):
    rng = np.random.default_rng(seed)
    n = 2 + seed % 4
    Q, c = random_symmetric(rng, n), rng.uniform(-1.0, 1.0, size=n)
    inst = SpecificClassInstance(Q=Q, c=c, a=np.ones(n))
    assert stqp_bound(Q, c) == pytest.approx(solve_rlt(inst.to_qp()).value, abs=1e-8)


@pytest.mark.parametrize("seed", range(5))
def test_specific_bound_with_general_weights(seed):
    rng = np.random.default_rng(100 + seed)
    n = 3
    inst = SpecificClassInstance(Q=random_symmetric(rng, n), c=rng.uniform(-1.0, 1.0, size=n),
                                 a=rng.uniform(0.5, 2.0, size=n))
    assert specific_bound(inst) == pytest.approx(solve_rlt(inst.to_qp()).value, abs=1e-8)


def test_specific_bound_unbounded_with_zero_weight():
    # x₂ has weight 0, so it is an unbounded direction with negative curvature
    inst = SpecificClassInstance(Q=np.diag([1.0, -1.0]), c=np.zeros(2), a=[1.0, 0.0])
    assert specific_bound(inst) == -np.inf


def test_reformulation_of_indefinite_square_problem(ex32):
    start = time.perf_counter()
    qpa = build_qpa(ex32)
    assert np.allclose(qpa.M.T, [[0, 0], [0, 1], [1, 0], [1, 1]])
    assert qpa.P.shape == (2, 0)
    assert np.allclose(qpa.Q_A, [[0, 0, 0, 0], [0, 2, 2, 4], [0, 2, -2, 0], [0, 4, 0, 4]])
    assert np.allclose(qpa.c_A, [0, -2, 0, -2])
    assert np.allclose(qpa.a_A, np.ones(4))
    assert stqp_bound(qpa.Q_A, qpa.c_A) == pytest.approx(-1.0, abs=1e-7)

    sandwich = bound_sandwich(ex32)
    assert sandwich.rlt == pytest.approx(-1.5, abs=1e-7)
    assert sandwich.rlt_qpa == pytest.approx(-1.0, abs=1e-7)
    assert sandwich.qp == pytest.approx(-1.0, abs=1e-7)
    assert sandwich.ordered

    result = global_min_qp(ex32)
    assert result.status == OracleStatus.OPTIMAL
    assert result.value == pytest.approx(-1.0, abs=1e-7)
    assert np.allclose(result.argmin, [1.0, 0.0])
    assert time.perf_counter() - start < 1.0


def test_lift_back_preserves_objective(ex32):
    qpa = build_qpa(ex32)
    reformulated = qpa.to_instance().to_qp()
    sol = solve_rlt(reformulated)
    back = qpa.lift_back(sol.point)
    value = 0.5 * np.sum(ex32.Q * back.X) + ex32.c @ back.x
    assert value == pytest.approx(sol.value, abs=1e-9)


def test_reformulation_with_lineality(strip_region):
    qp = QpInstance(Q=[[3.0, 3.0], [3.0, 3.0]], c=[1.0, 1.0], poly=strip_region)
    qpa = build_qpa(qp)
    assert qpa.M.shape == (2, 2)
    assert qpa.P.shape == (2, 2)
    assert np.allclose(qpa.a_A, [1.0, 1.0, 0.0, 0.0])


@pytest.mark.parametrize("seed", range(50))
def test_sandwich_on_random_bounded_instances(seed):
    rng = np.random.default_rng(2000 + seed)
    n = 2 + seed % 2
    P = unit_box(n) if seed % 3 == 0 else random_polytope(rng, n, 1)
    qp = QpInstance(Q=random_symmetric(rng, n), c=rng.uniform(-1.0, 1.0, size=n), poly=P)
    sandwich = bound_sandwich(qp)
    assert sandwich.rlt <= sandwich.rlt_qpa + 1e-7
    assert sandwich.rlt_qpa <= sandwich.qp + 1e-7
    assert sandwich.ordered


def test_face_upper_bound(ex32):
    assert face_upper_bound(ex32) == pytest.approx(-1.0)
    assert face_upper_bound(ex32) >= solve_rlt(ex32).value - 1e-9
    assert pairwise_bound(np.zeros((1, 1)), np.array([1.0]), [np.array([2.0])]) == pytest.approx(2.0)


def test_strip_face_bound():
    qp = QpInstance(Q=[[3.0, 3.0], [3.0, 3.0]], c=[1.0, 1.0], poly=strip())
    # attained by the midpoint lift of the two least-norm points
    assert face_upper_bound(qp) == pytest.approx(-1.5)


@pytest.mark.parametrize("seed", range(12))
def test_reformulation_keeps_the_global_optimum(seed):
    rng = np.random.default_rng(2100 + seed)
    n = 2 + seed % 2
    P = unit_box(n) if seed % 4 == 0 else random_polytope(rng, n, 1)
    qp = QpInstance(Q=random_symmetric(rng, n), c=rng.uniform(-1.0, 1.0, size=n), poly=P)
    original = global_min_qp(qp)
    reformulated = global_min_qp(build_qpa(qp).to_instance().to_qp())
    assert original.status == reformulated.status == OracleStatus.OPTIMAL
    assert reformulated.value == pytest.approx(original.value, abs=1e-7)
