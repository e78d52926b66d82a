"""Recession directions of the lifted polyhedron."""
import logging
from typing import Optional

import numpy as np

from ..core.config import settings
from ..core.errors import DimensionMismatch, NotInF, NotInRecessionCone
from ..lp.problem import LpProblem, LpStatus
from ..lp.simplex import solve_lp
from ..polyhedra.enumeration import extreme_rays
from ..polyhedra.polyhedron import ConeGenerators, Polyhedron
from .builder import build_rlt
from .instance import LiftedDirection, QpInstance

logger = logging.getLogger(__name__)


def in_lifted_recession_cone(P: Polyhedron, direction: LiftedDirection, tol: Optional[float] = None) -> bool:
    """Gᵀd ≤ 0, Hᵀd = 0, HᵀD − hdᵀ = 0 and GᵀDG − Gᵀdgᵀ − gdᵀG ≥ 0."""
    tol = settings.FEASIBILITY_TOL if tol is None else tol
    d, D = direction.d, direction.D
    scale = tol * (1.0 + np.max(np.abs(D), initial=0.0) + np.max(np.abs(d), initial=0.0)) \
        * (1.0 + np.max(np.abs(P.g), initial=0.0)) ** 2
    Gd = P.G.T @ d
    if np.any(Gd > scale) or np.any(np.abs(P.H.T @ d) > scale):
        return False
    if np.any(np.abs(P.H.T @ D - np.outer(P.h, d)) > scale):
        return False
    block = P.G.T @ D @ P.G - np.outer(Gd, P.g) - np.outer(P.g, Gd)
    return not np.any(block < -scale)


def lift_recession(P: Polyhedron, x_hat, d_hat, K=None, rays: Optional[ConeGenerators] = None) -> LiftedDirection:
    """
    The lifted direction (d̂, x̂d̂ᵀ + d̂x̂ᵀ + RKRᵀ) where R stacks the extreme rays.
    K must be t×t, symmetric and entrywise nonnegative (t = number of rays).
    """
    x_hat = np.asarray(x_hat, dtype=float)
    d_hat = np.asarray(d_hat, dtype=float)
    if not P.contains(x_hat):
        raise NotInF("x_hat is not in the polyhedron")
    tol = settings.FEASIBILITY_TOL
    if np.any(P.G.T @ d_hat > tol) or np.any(np.abs(P.H.T @ d_hat) > tol):
        raise NotInRecessionCone("d_hat is not a recession direction")

    rays = extreme_rays(P) if rays is None else rays
    R = rays.extreme_rays
    t = R.shape[1]
    K = np.zeros((t, t)) if K is None or np.size(K) == 0 else np.asarray(K, dtype=float)
    if K.shape != (t, t):
        raise DimensionMismatch(f"K has shape {K.shape}, expected {(t, t)}")
    if np.any(np.abs(K - K.T) > tol * (1.0 + np.max(np.abs(K), initial=0.0))):
        raise NotInRecessionCone("K must be symmetric")
    if np.any(K < -tol):
        raise NotInRecessionCone("K must be entrywise nonnegative")

    D = np.outer(x_hat, d_hat) + np.outer(d_hat, x_hat) + R @ K @ R.T
    direction = LiftedDirection(d=d_hat, D=D)
    if not in_lifted_recession_cone(P, direction):
        raise NotInRecessionCone("lifted direction leaves the lifted recession cone")
    return direction


def lifted_recession_is_trivial(P: Polyhedron) -> bool:
    """
    True iff the lifted recession cone is {0}. The cone is the RLT feasible set
    with zero right-hand sides; each coordinate is maximized in both signs over
    its intersection with the unit box.
    """
    rel = build_rlt(QpInstance(Q=np.zeros((P.n, P.n)), c=np.zeros(P.n), poly=P))
    lp = rel.lp
    N = lp.num_vars
    box_lhs = np.vstack([lp.ineq_lhs, np.eye(N)])
    box_rhs = np.concatenate([np.zeros(lp.num_ineq), np.ones(N)])
    for k in range(N):
        for sign in (1.0, -1.0):
            objective = np.zeros(N)
            objective[k] = -sign
            outcome = solve_lp(LpProblem.build(objective, lp.eq_lhs, np.zeros(lp.num_eq), box_lhs, box_rhs,
                                               lower_bounds=-np.ones(N)))
            if outcome.status == LpStatus.OPTIMAL and outcome.objective_value < -settings.FEASIBILITY_TOL:
                logger.debug(f"nonzero lifted recession direction along coordinate {k}")
                return False
    return True
