"""Polyhedra F = {x : Gᵀx ≤ g, Hᵀx = h} with constraint normals stored as columns."""
import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import model_validator

from ..core.config import settings
from ..core.errors import DimensionMismatch, EmptyPolyhedron
from ..core.linalg import numerical_rank
from ..lp.problem import LpProblem, LpStatus
from ..lp.simplex import solve_lp
from ..schemas.base import ArrayModel, FloatArray

logger = logging.getLogger(__name__)


class Polyhedron(ArrayModel):
    n: int
    G: FloatArray
    g: FloatArray
    H: FloatArray
    h: FloatArray

    @model_validator(mode="before")
    @classmethod
    def fill_empty_blocks(cls, data):
        if isinstance(data, dict):
            n = int(data["n"])
            for M, v in (("G", "g"), ("H", "h")):
                if data.get(M) is None or np.size(data.get(M)) == 0:
                    data = {**data, M: np.zeros((n, 0)), v: np.zeros(0)}
        return data

    @model_validator(mode="after")
    def check_shapes(self) -> "Polyhedron":
        if self.G.ndim != 2 or self.G.shape[0] != self.n or self.G.shape[1] != self.g.shape[0]:
            raise DimensionMismatch(f"G has shape {self.G.shape} but n={self.n}, m={self.g.shape[0]}")
        if self.H.ndim != 2 or self.H.shape[0] != self.n or self.H.shape[1] != self.h.shape[0]:
            raise DimensionMismatch(f"H has shape {self.H.shape} but n={self.n}, p={self.h.shape[0]}")
        return self

    @classmethod
    def from_rows(cls, A, b, B=None, d=None) -> "Polyhedron":
        """Build from row form {x : A x ≤ b, B x = d}."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        n = A.shape[1]
        B = np.zeros((0, n)) if B is None or np.size(B) == 0 else np.atleast_2d(np.asarray(B, dtype=float))
        d = np.zeros(0) if d is None else np.asarray(d, dtype=float).reshape(-1)
        return cls(n=n, G=A.T, g=np.asarray(b, dtype=float).reshape(-1), H=B.T, h=d)

    def to_rows(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.G.T, self.g, self.H.T, self.h

    @property
    def m(self) -> int:
        return self.g.shape[0]

    @property
    def p(self) -> int:
        return self.h.shape[0]

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Slacks g − Gᵀx of the inequalities."""
        return self.g - self.G.T @ np.asarray(x, dtype=float)

    def contains(self, x, tol: Optional[float] = None) -> bool:
        tol = settings.FEASIBILITY_TOL if tol is None else tol
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatch(f"point has shape {x.shape}, expected ({self.n},)")
        if self.m and np.any(self.residuals(x) < -tol):
            return False
        if self.p and np.any(np.abs(self.H.T @ x - self.h) > tol):
            return False
        return True

    def feasibility_lp(self, objective=None) -> LpProblem:
        objective = np.zeros(self.n) if objective is None else objective
        return LpProblem.build(objective, self.H.T, self.h, self.G.T, self.g)


class FaceDescriptor(ArrayModel):
    active_ineq: Tuple[int, ...]
    dim: int
    witness: FloatArray


class ConeGenerators(ArrayModel):
    """lineality_basis is n×ℓ, extreme_rays is n×t (rays of the pointed part)."""
    lineality_basis: FloatArray
    extreme_rays: FloatArray

    @property
    def generators(self) -> np.ndarray:
        """Conic generators of the whole cone: rays and both signs of the lineality basis."""
        return np.hstack([self.extreme_rays, self.lineality_basis, -self.lineality_basis])


def recession_cone(P: Polyhedron) -> Polyhedron:
    return Polyhedron(n=P.n, G=P.G, g=np.zeros(P.m), H=P.H, h=np.zeros(P.p))


def feasible_point(P: Polyhedron) -> np.ndarray:
    """A point of F from the phase-1 LP; raises EmptyPolyhedron when F is empty."""
    outcome = solve_lp(P.feasibility_lp())
    if outcome.status == LpStatus.INFEASIBLE:
        raise EmptyPolyhedron("the polyhedron has no feasible point")
    return outcome.primal


def is_bounded(P: Polyhedron) -> bool:
    """
    F is bounded iff every ±eᵢ lies in the dual cone, i.e. Gu + Hw = ±eᵢ has a
    solution with u ≥ 0. Raises EmptyPolyhedron for an empty F.
    """
    feasible_point(P)
    lower = np.concatenate([np.zeros(P.m), np.full(P.p, -np.inf)])
    lhs = np.hstack([P.G, P.H])
    for i in range(P.n):
        for sign in (1.0, -1.0):
            target = np.zeros(P.n)
            target[i] = sign
            lp = LpProblem.build(np.zeros(P.m + P.p), lhs, target, lower_bounds=lower)
            if solve_lp(lp).status == LpStatus.INFEASIBLE:
                logger.debug(f"direction {'+' if sign > 0 else '-'}e{i} is not in the dual cone")
                return False
    return True


def constraint_rank(P: Polyhedron) -> int:
    return numerical_rank(np.hstack([P.G, P.H]))


def active_set(P: Polyhedron, x, tol: Optional[float] = None) -> List[int]:
    tol = settings.FEASIBILITY_TOL if tol is None else tol
    r = P.residuals(x)
    return [i for i in range(P.m) if abs(r[i]) <= tol * (1.0 + abs(P.g[i]))]


def is_vertex(P: Polyhedron, x, tol: Optional[float] = None) -> bool:
    """x ∈ F and the active normals together with H span Rⁿ."""
    if not P.contains(x, tol):
        return False
    active = active_set(P, x, tol)
    return numerical_rank(np.hstack([P.G[:, active], P.H])) == P.n
