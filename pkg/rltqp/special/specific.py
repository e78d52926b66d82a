"""
The specific class F = {x : aᵀx = 1, x ≥ 0} with a ≥ 0, a ≠ 0, and standard QPs (a = e).

The vertices are v = eʲ/a_j for a_j > 0, and the lifted polyhedron is exactly
{lift(v)} ∪ {midpoint lifts of vertex pairs}, which gives the relaxation bound
in closed form whenever it is finite.
"""
import itertools
import logging
from typing import List, Sequence

import numpy as np
from pydantic import model_validator

from ..core.errors import DimensionMismatch, InvalidWeights
from ..lp.problem import LpStatus
from ..polyhedra.polyhedron import Polyhedron
from ..relaxation.builder import solve_rlt
from ..relaxation.instance import LiftedPoint, QpInstance, lift, midpoint_lift
from ..schemas.base import ArrayModel, FloatArray

logger = logging.getLogger(__name__)


def _check_weights(a: np.ndarray):
    if a.ndim != 1 or a.size == 0:
        raise InvalidWeights("a must be a nonempty vector")
    if np.any(a < 0) or not np.any(a > 0):
        raise InvalidWeights("a must be nonnegative and nonzero")


class SpecificClassInstance(ArrayModel):
    Q: FloatArray
    c: FloatArray
    a: FloatArray

    @model_validator(mode="after")
    def check_weights(self) -> "SpecificClassInstance":
        _check_weights(self.a)
        n = self.a.shape[0]
        if self.Q.shape != (n, n) or self.c.shape != (n,):
            raise DimensionMismatch(f"Q {self.Q.shape} and c {self.c.shape} do not match n={n}")
        return self

    def to_qp(self) -> QpInstance:
        n = self.a.shape[0]
        poly = Polyhedron(n=n, G=-np.eye(n), g=np.zeros(n), H=self.a.reshape(n, 1), h=np.ones(1))
        return QpInstance(Q=self.Q, c=self.c, poly=poly)


def specific_vertices(a) -> List[np.ndarray]:
    a = np.asarray(a, dtype=float)
    _check_weights(a)
    vertices = []
    for j in np.flatnonzero(a > 0):
        v = np.zeros(a.size)
        v[j] = 1.0 / a[j]
        vertices.append(v)
    return vertices


def pairwise_bound(Q: np.ndarray, c: np.ndarray, points: Sequence[np.ndarray]) -> float:
    """min over points v of ½vᵀQv + cᵀv and over pairs i < j of ½(vⁱᵀQvʲ + cᵀ(vⁱ + vʲ))."""
    values = [0.5 * v @ Q @ v + c @ v for v in points]
    values += [0.5 * (vi @ Q @ vj + c @ (vi + vj)) for vi, vj in itertools.combinations(points, 2)]
    return float(min(values))


def specific_bound(inst: SpecificClassInstance) -> float:
    """Relaxation bound of a specific-class instance: -inf if unbounded, else the closed form."""
    status = solve_rlt(inst.to_qp()).status
    if status == LpStatus.UNBOUNDED:
        logger.info("specific-class relaxation is unbounded")
        return -np.inf
    return pairwise_bound(inst.Q, inst.c, specific_vertices(inst.a))


def stqp_bound(Q, c) -> float:
    """Relaxation bound of a standard QP: min of ½Q_kk + c_k and ½(Q_ij + c_i + c_j)."""
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    return pairwise_bound(0.5 * (Q + Q.T), c, list(np.eye(c.size)))


def structural_lifted_vertices(a) -> List[LiftedPoint]:
    vertices = specific_vertices(a)
    points = [lift(v) for v in vertices]
    points += [midpoint_lift(v1, v2) for v1, v2 in itertools.combinations(vertices, 2)]
    return points
