import time

import numpy as np
import pytest

from rltqp.core.config import settings
from rltqp.core.errors import DimensionMismatch, InfeasiblePoint, NotInF, NotInRecessionCone, ScaleLimit
from rltqp.lp.certificate import verify_certificate
from rltqp.lp.problem import LpStatus
from rltqp.polyhedra.enumeration import enumerate_vertices
from rltqp.polyhedra.polyhedron import is_bounded, is_vertex
from rltqp.relaxation.builder import build_rlt, is_feasible_lifted, lifted_residuals, solve_rlt
from rltqp.relaxation.instance import LiftedDirection, LiftedPoint, QpInstance, lift, midpoint_lift
from rltqp.relaxation.lifting import in_lifted_recession_cone, lift_recession, lifted_recession_is_trivial
from rltqp.relaxation.symindex import SymIndex
from rltqp.relaxation.vertices import enumerate_lifted_vertices, is_vertex_of_lifted
from rltqp.special.specific import SpecificClassInstance, structural_lifted_vertices

from .conftest import (
    orthant, random_polytope, random_region, random_symmetric, same_lifted, same_lifted_sets, unit_box, unit_simplex,
)


def _zero_objective(P) -> QpInstance:
    return QpInstance(Q=np.zeros((P.n, P.n)), c=np.zeros(P.n), poly=P)


def test_sym_index_layout():
    sym = SymIndex(3)
    assert sym.dim == 6
    assert [sym.pair(k) for k in range(sym.dim)] == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    assert sym.flat(2, 1) == sym.flat(1, 2) == 4
    X = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]])
    assert np.array_equal(sym.from_flat(sym.to_flat(X)), X)
    M = np.arange(9.0).reshape(3, 3)
    assert sym.inner_coefficients(M) @ sym.to_flat(X) == pytest.approx(np.sum(M * X))


def test_box_relaxation_dimensions(box):
    rel = build_rlt(_zero_objective(box))
    assert rel.lp.num_vars == 5
    assert rel.lp.num_eq == 0
    assert rel.lp.num_ineq == 4 + 10


def test_simplex_relaxation_dimensions():
    rel = build_rlt(_zero_objective(unit_simplex(2)))
    assert rel.lp.num_vars == 5
    assert [label.kind for label in rel.eq_labels] == ["eq", "eqprod", "eqprod"]
    assert sum(label.kind == "ineq" for label in rel.ineq_labels) == 2
    assert sum(label.kind == "prod" for label in rel.ineq_labels) == 3


def test_lifts_are_feasible(box):
    qp = _zero_objective(box)
    rel = build_rlt(qp)
    for v in enumerate_vertices(box):
        pt = lift(v)
        assert is_feasible_lifted(qp, pt)
        z = rel.flatten(pt.x, pt.X)
        assert np.all(rel.lp.ineq_lhs @ z <= rel.lp.ineq_rhs + 1e-12)
    res = lifted_residuals(qp, np.array([0.5, 0.5]), np.eye(2))
    assert np.any(res["prod"] < 0)


def test_relaxation_bound_of_indefinite_square_problem(ex32):
    start = time.perf_counter()
    rel = build_rlt(ex32)
    sol = solve_rlt(ex32, rel)
    assert sol.status == LpStatus.OPTIMAL
    assert sol.value == pytest.approx(-1.5, abs=1e-7)
    assert rel.objective_at(sol.point) == pytest.approx(-1.5, abs=1e-7)
    assert verify_certificate(rel.lp, sol.outcome)
    assert time.perf_counter() - start < 1.0
    # the non-structural vertex attains the bound
    extra = LiftedPoint(x=[0.5, 0.5], X=[[0.5, 0.0], [0.0, 0.0]])
    assert rel.objective_at(extra) == pytest.approx(-1.5)


def test_empty_region_relaxation_is_infeasible():
    from rltqp.polyhedra.polyhedron import Polyhedron
    P = Polyhedron.from_rows([[1.0], [-1.0]], [0.0, -1.0])
    sol = solve_rlt(QpInstance(Q=[[1.0]], c=[0.0], poly=P))
    assert sol.status == LpStatus.INFEASIBLE


def test_unbounded_relaxation_has_lifted_ray():
    P = orthant(2)
    qp = QpInstance(Q=[[-1.0, 0.0], [0.0, 1.0]], c=[0.0, 0.0], poly=P)
    rel = build_rlt(qp)
    sol = solve_rlt(qp, rel)
    assert sol.status == LpStatus.UNBOUNDED
    assert in_lifted_recession_cone(P, sol.ray)
    assert 0.5 * np.sum(qp.Q * sol.ray.D) + qp.c @ sol.ray.d < 0
    assert verify_certificate(rel.lp, sol.outcome)


def test_structural_and_extra_box_vertices(box):
    start = time.perf_counter()
    rel = build_rlt(_zero_objective(box))
    vertices = enumerate_vertices(box)
    structural = [lift(v) for v in vertices]
    structural += [midpoint_lift(vertices[i], vertices[j]) for i in range(4) for j in range(i + 1, 4)]
    extra = LiftedPoint(x=[0.5, 0.5], X=[[0.5, 0.0], [0.0, 0.0]])
    assert len(structural) == 10
    assert all(is_vertex_of_lifted(pt, rel) for pt in structural)
    assert is_vertex_of_lifted(extra, rel)

    found = enumerate_lifted_vertices(rel)
    assert len(found) > 10
    assert all(any(same_lifted(pt, other) for other in found) for pt in structural)
    assert any(same_lifted(extra, other) for other in found)
    assert time.perf_counter() - start < 10.0


def test_non_vertex_and_infeasible_lifted_points(box):
    rel = build_rlt(_zero_objective(box))
    middle = LiftedPoint(x=[0.5, 0.5], X=[[0.5, 0.5], [0.5, 0.5]])
    assert not is_vertex_of_lifted(middle, rel)
    with pytest.raises(InfeasiblePoint):
        is_vertex_of_lifted(LiftedPoint(x=[2.0, 0.0], X=[[4.0, 0.0], [0.0, 0.0]]), rel)


@pytest.mark.parametrize("seed", range(10))
def test_specific_class_vertex_set_is_complete(seed):
    rng = np.random.default_rng(seed)
    n = 2 if seed % 2 == 0 else 3
    a = rng.uniform(0.5, 2.0, size=n)
    qp = SpecificClassInstance(Q=np.zeros((n, n)), c=np.zeros(n), a=a).to_qp()
    found = enumerate_lifted_vertices(build_rlt(qp))
    assert same_lifted_sets(found, structural_lifted_vertices(a))


def test_lifted_enumeration_guard(monkeypatch):
    monkeypatch.setattr(settings, "LIFTED_FLAT_LIMIT", 4)
    with pytest.raises(ScaleLimit):
        enumerate_lifted_vertices(build_rlt(_zero_objective(unit_box(2))))


def test_lift_recession_on_orthant():
    P = orthant(2)
    direction = lift_recession(P, [1.0, 1.0], [1.0, 0.0], K=np.eye(2))
    assert in_lifted_recession_cone(P, direction)
    assert np.allclose(direction.d, [1.0, 0.0])
    default = lift_recession(P, [1.0, 1.0], [1.0, 0.0])
    assert np.allclose(default.D, [[2.0, 1.0], [1.0, 0.0]])


def test_lift_recession_errors(box):
    P = orthant(2)
    with pytest.raises(NotInF):
        lift_recession(P, [-1.0, 0.0], [1.0, 0.0])
    with pytest.raises(NotInRecessionCone):
        lift_recession(P, [1.0, 1.0], [-1.0, 0.0])
    with pytest.raises(NotInRecessionCone):
        lift_recession(P, [1.0, 1.0], [1.0, 0.0], K=-np.eye(2))
    with pytest.raises(DimensionMismatch):
        lift_recession(P, [1.0, 1.0], [1.0, 0.0], K=np.eye(3))
    # rejected even though the resulting direction stays in the lifted cone
    with pytest.raises(NotInRecessionCone):
        lift_recession(P, [1.0, 1.0], [1.0, 0.0], K=[[1.0, -0.1], [-0.1, 1.0]])
    with pytest.raises(NotInRecessionCone):
        lift_recession(P, [1.0, 1.0], [1.0, 0.0], K=[[1.0, 0.5], [0.0, 1.0]])
    assert not in_lifted_recession_cone(box, LiftedDirection(d=[1.0, 0.0], D=np.zeros((2, 2))))


@pytest.mark.parametrize("seed", range(30))
def test_boundedness_matches_trivial_lifted_recession(seed):
    rng = np.random.default_rng(1000 + seed)
    P = random_region(rng, 2)
    assert is_bounded(P) == lifted_recession_is_trivial(P)


def test_trivial_lifted_recession_on_known_regions(box, strip_region):
    assert lifted_recession_is_trivial(box)
    assert not lifted_recession_is_trivial(strip_region)
    assert not lifted_recession_is_trivial(orthant(2))


@pytest.mark.parametrize("seed", range(10))
def test_vertex_lifts_and_midpoints_on_random_polytopes(seed):
    rng = np.random.default_rng(1100 + seed)
    n = 2 if seed % 2 == 0 else 3
    P = random_polytope(rng, n, 1)
    rel = build_rlt(_zero_objective(P))
    vertices = enumerate_vertices(P)
    assert all(is_vertex_of_lifted(lift(v), rel) for v in vertices)
    for _ in range(5):
        i, j = rng.choice(len(vertices), size=2, replace=False)
        assert is_vertex_of_lifted(midpoint_lift(vertices[i], vertices[j]), rel)
    centre = np.mean(vertices, axis=0)
    assert not is_vertex_of_lifted(lift(centre), rel)
    i, j = rng.choice(len(vertices), size=2, replace=False)
    assert not is_vertex_of_lifted(lift(0.5 * (vertices[i] + vertices[j])), rel)
    if n == 2:
        found = enumerate_lifted_vertices(rel)
        assert all(any(same_lifted(lift(v), pt) for pt in found) for v in vertices)
        # lifted vertices whose X is the outer product of x come from vertices of P
        for pt in found:
            if np.allclose(pt.X, np.outer(pt.x, pt.x), atol=1e-7):
                assert is_vertex(P, pt.x)


@pytest.mark.parametrize("seed", range(10))
def test_relaxation_unbounded_only_over_unbounded_regions(seed):
    rng = np.random.default_rng(1200 + seed)
    P = random_region(rng, 2)
    statuses = [
        solve_rlt(QpInstance(Q=random_symmetric(rng, 2), c=rng.uniform(-1.0, 1.0, size=2), poly=P)).status
        for _ in range(20)
    ]
    assert (LpStatus.UNBOUNDED not in statuses) == is_bounded(P)
