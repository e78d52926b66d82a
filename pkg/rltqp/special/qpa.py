"""
Reformulation of a QP in minimal-face-witness and ray coordinates.

With W = [M P] (witness columns, then cone generators) every x ∈ F is W x_A
for some x_A ≥ 0 with Σ_{witness part} x_A = 1, so the QP becomes a
specific-class instance with data WᵀQW, Wᵀc and a_A = (e; 0).
"""
import logging

import numpy as np

from ..core.config import settings
from ..core.errors import OracleIncomplete, ScaleLimit
from ..oracle.global_qp import OracleStatus, global_min_qp
from ..polyhedra.enumeration import decompose, enumerate_minimal_faces
from ..polyhedra.polyhedron import feasible_point
from ..relaxation.builder import solve_rlt
from ..relaxation.instance import LiftedPoint, QpInstance
from ..schemas.base import ArrayModel, FloatArray
from .specific import SpecificClassInstance, pairwise_bound

logger = logging.getLogger(__name__)


class QpaReformulation(ArrayModel):
    M: FloatArray
    P: FloatArray
    Q_A: FloatArray
    c_A: FloatArray
    a_A: FloatArray

    @property
    def W(self) -> np.ndarray:
        return np.hstack([self.M, self.P])

    def to_instance(self) -> SpecificClassInstance:
        return SpecificClassInstance(Q=self.Q_A, c=self.c_A, a=self.a_A)

    def lift_back(self, pt: LiftedPoint) -> LiftedPoint:
        """Map a point of the reformulated relaxation to the original one; objective values agree."""
        W = self.W
        return LiftedPoint(x=W @ pt.x, X=W @ pt.X @ W.T)


def build_qpa(qp: QpInstance) -> QpaReformulation:
    feasible_point(qp.poly)
    witnesses, cone = decompose(qp.poly)
    M = np.column_stack(witnesses)
    P = cone.generators
    s, t = M.shape[1], P.shape[1]
    if s + t > settings.QPA_MAX_COLUMNS:
        raise ScaleLimit(f"reformulation needs {s + t} columns, limit is {settings.QPA_MAX_COLUMNS}")
    W = np.hstack([M, P])
    logger.info(f"reformulation with {s} witnesses and {t} cone generators")
    return QpaReformulation(M=M, P=P, Q_A=W.T @ qp.Q @ W, c_A=W.T @ qp.c,
                            a_A=np.concatenate([np.ones(s), np.zeros(t)]))


def _at_most(a: float, b: float, tol: float) -> bool:
    if not np.isfinite(b):
        return bool(a <= b)
    return bool(a <= b + tol * (1.0 + abs(b)))


class BoundSandwich(ArrayModel):
    rlt: float
    rlt_qpa: float
    qp: float
    ordered: bool


def bound_sandwich(qp: QpInstance, tol: float = 1e-7) -> BoundSandwich:
    """The relaxation bound, the bound of the reformulated relaxation and the global optimum."""
    rlt = solve_rlt(qp).value
    rlt_qpa = solve_rlt(build_qpa(qp).to_instance().to_qp()).value
    oracle = global_min_qp(qp)
    if oracle.status == OracleStatus.INCOMPLETE:
        raise OracleIncomplete("the global optimum could not be certified")
    optimum = oracle.value
    ordered = _at_most(rlt, rlt_qpa, tol) and _at_most(rlt_qpa, optimum, tol)
    if not ordered:
        logger.warning(f"bounds out of order: {rlt:.12g}, {rlt_qpa:.12g}, {optimum:.12g}")
    return BoundSandwich(rlt=rlt, rlt_qpa=rlt_qpa, qp=optimum, ordered=ordered)


def face_upper_bound(qp: QpInstance) -> float:
    """Upper bound on the relaxation value from the minimal-face witnesses and their pairwise midpoints."""
    feasible_point(qp.poly)
    witnesses = [face.witness for face in enumerate_minimal_faces(qp.poly)]
    return pairwise_bound(qp.Q, qp.c, witnesses)
