import itertools

import numpy as np
import pytest

from rltqp.core.config import settings
from rltqp.core.errors import ScaleLimit
from rltqp.oracle.global_qp import OracleStatus, global_min_qp, minimize_on_affine, qp_unbounded_witness
from rltqp.polyhedra.enumeration import enumerate_vertices
from rltqp.polyhedra.polyhedron import Polyhedron
from rltqp.generators.instances import gen_inexact_minfaces, gen_unbounded
from rltqp.polyhedra.polyhedron import is_bounded, recession_cone
from rltqp.relaxation.builder import solve_rlt
from rltqp.relaxation.instance import QpInstance

from .conftest import orthant, prism, random_polytope, random_region, random_symmetric, strip, unit_box


def test_interior_minimum_of_convex_objective(box):
    qp = QpInstance(Q=np.eye(2), c=[-0.25, -0.5], poly=box)
    result = global_min_qp(qp)
    assert result.status == OracleStatus.OPTIMAL
    assert np.allclose(result.argmin, [0.25, 0.5])
    assert result.attaining_face.dim == 2
    assert result.attaining_face.active_ineq == ()


def test_minimum_on_an_edge(box):
    qp = QpInstance(Q=np.eye(2), c=[-2.0, -0.5], poly=box)
    result = global_min_qp(qp)
    assert np.allclose(result.argmin, [1.0, 0.5])
    assert result.attaining_face.active_ineq == (0,)
    assert result.value == pytest.approx(0.5 * (1 + 0.25) - 2.0 - 0.25)


@pytest.mark.parametrize("seed", range(10))
def test_concave_minimum_is_best_vertex(seed):
    rng = np.random.default_rng(300 + seed)
    P = random_polytope(rng, 2, 2)
    A = rng.normal(size=(2, 2))
    qp = QpInstance(Q=-(A @ A.T), c=rng.normal(size=2), poly=P)
    result = global_min_qp(qp)
    best = min(qp.objective(v) for v in enumerate_vertices(P))
    assert result.status == OracleStatus.OPTIMAL
    assert result.value == pytest.approx(best, abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_value_not_above_sampled_points(seed):
    rng = np.random.default_rng(400 + seed)
    P = unit_box(2)
    qp = QpInstance(Q=random_symmetric(rng, 2), c=rng.uniform(-1.0, 1.0, size=2), poly=P)
    result = global_min_qp(qp)
    grid = np.linspace(0.0, 1.0, 21)
    sampled = min(qp.objective([a, b]) for a, b in itertools.product(grid, grid))
    assert result.value <= sampled + 1e-9
    assert P.contains(result.argmin)


def test_negative_curvature_along_a_ray():
    qp = QpInstance(Q=[[-1.0, 0.0], [0.0, 1.0]], c=[0.0, 0.0], poly=orthant(2))
    result = global_min_qp(qp)
    assert result.status == OracleStatus.UNBOUNDED
    x, d = result.unbounded_witness
    assert qp.poly.contains(x)
    assert d @ qp.Q @ d < 0


def test_linear_descent_along_a_ray():
    qp = QpInstance(Q=[[0.0, 0.0], [0.0, 1.0]], c=[-1.0, 0.0], poly=orthant(2))
    x, d = qp_unbounded_witness(qp)
    assert d @ qp.Q @ d == pytest.approx(0.0)
    assert (qp.Q @ x + qp.c) @ d < 0


def test_pairwise_negative_combination():
    # each ray has positive curvature, their combination does not
    qp = QpInstance(Q=[[1.0, -2.0], [-2.0, 1.0]], c=[0.0, 0.0], poly=orthant(2))
    assert global_min_qp(qp).status == OracleStatus.UNBOUNDED


def test_bounded_along_lineality(strip_region):
    qp = QpInstance(Q=[[3.0, 3.0], [3.0, 3.0]], c=[1.0, 1.0], poly=strip_region)
    result = global_min_qp(qp)
    assert result.status == OracleStatus.OPTIMAL
    assert result.value == pytest.approx(-1.0 / 6.0)
    assert np.allclose(result.argmin, [-1.0 / 6.0, -1.0 / 6.0])
    assert qp_unbounded_witness(qp) is None


def test_copositive_gram_certifies_boundedness():
    # Q is indefinite but nonnegative on the orthant
    qp = QpInstance(Q=[[0.0, 1.0], [1.0, 0.0]], c=[1.0, 1.0], poly=orthant(2))
    result = global_min_qp(qp)
    assert result.status == OracleStatus.OPTIMAL
    assert result.value == pytest.approx(0.0)
    assert np.allclose(result.argmin, [0.0, 0.0])


def test_infeasible_region():
    P = Polyhedron.from_rows([[1.0], [-1.0]], [0.0, -1.0])
    result = global_min_qp(QpInstance(Q=[[1.0]], c=[0.0], poly=P))
    assert result.status == OracleStatus.INFEASIBLE
    assert qp_unbounded_witness(QpInstance(Q=[[1.0]], c=[0.0], poly=P)) is None


def test_minimize_on_affine():
    qp = QpInstance(Q=np.eye(2), c=[-1.0, 0.0], poly=strip())
    x, value = minimize_on_affine(qp, [0.0, 0.0], np.array([[1.0], [0.0]]))
    assert np.allclose(x, [1.0, 0.0])
    assert value == pytest.approx(-0.5)
    concave = QpInstance(Q=-np.eye(2), c=[0.0, 0.0], poly=strip())
    assert minimize_on_affine(concave, [0.0, 0.0], np.eye(2)) is None


def test_face_count_guard(monkeypatch):
    monkeypatch.setattr(settings, "ORACLE_MAX_FACES", 5)
    with pytest.raises(ScaleLimit):
        global_min_qp(QpInstance(Q=np.eye(2), c=[0.0, 0.0], poly=unit_box(2)))


@pytest.mark.parametrize("seed", range(60))
def test_value_never_below_relaxation_bound_on_prism(seed):
    f1, f2 = [(0, 1), (0, 3), (1, 2)][seed % 3]
    qp = gen_inexact_minfaces(prism(), f1, f2, seed).qp
    result = global_min_qp(qp)
    assert result.status == OracleStatus.OPTIMAL
    assert result.value >= solve_rlt(qp).value - 1e-7
    assert prism().contains(result.argmin)


def test_flat_directions_get_no_step():
    # q is constant along (1, −1, 0); a minimum-norm step keeps the point bounded
    P = prism()
    qp = QpInstance(Q=[[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]], c=[0.0, 0.0, 0.0], poly=P)
    result = global_min_qp(qp)
    assert result.value == pytest.approx(0.0, abs=1e-9)
    assert np.max(np.abs(result.argmin)) < 1.0


@pytest.mark.parametrize("seed", range(20))
def test_unbounded_witness_is_a_descent_ray(seed):
    rng = np.random.default_rng(900 + seed)
    P = orthant(2) if seed % 2 else random_region(rng, 2)
    if is_bounded(P):
        P = strip()
    qp = gen_unbounded(P, seed).qp
    witness = qp_unbounded_witness(qp)
    result = global_min_qp(qp)
    if witness is None:
        assert result.status != OracleStatus.UNBOUNDED
        return
    x, d = witness
    assert P.contains(x)
    assert recession_cone(P).contains(d) and np.linalg.norm(d) > 0
    assert d @ qp.Q @ d < 0 or qp.gradient(x) @ d < 0
    assert result.status == OracleStatus.UNBOUNDED
