"""
Desk-scale global minimization of q(x) = ½xᵀQx + cᵀx over a polyhedron.

Boundedness is settled on the recession cone first; the minimum is then found
among the stationary points of q on the affine hulls of all faces, which is
exhaustive whenever q is bounded below (the minimum is attained and lies in the
relative interior of some face).
"""
import itertools
import logging
from enum import Enum
from math import comb
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..core.config import settings
from ..core.errors import EmptyPolyhedron, ScaleLimit
from ..core.linalg import is_psd, min_norm_solution, null_basis, numerical_rank
from ..lp.problem import LpProblem, LpStatus
from ..lp.simplex import solve_lp
from ..polyhedra.enumeration import enumerate_minimal_faces, extreme_rays
from ..polyhedra.polyhedron import ConeGenerators, FaceDescriptor, active_set, feasible_point
from ..relaxation.instance import QpInstance
from ..schemas.base import ArrayModel, OptionalFloatArray

logger = logging.getLogger(__name__)


class OracleStatus(str, Enum):
    OPTIMAL = "Optimal"
    UNBOUNDED = "Unbounded"
    INFEASIBLE = "Infeasible"
    INCOMPLETE = "Incomplete"


class GlobalQpResult(ArrayModel):
    status: OracleStatus
    value: float
    argmin: OptionalFloatArray = None
    attaining_face: Optional[FaceDescriptor] = None
    unbounded_witness: Optional[Tuple[np.ndarray, np.ndarray]] = None


def _stationary_point(qp: QpInstance, x0: np.ndarray, Z: np.ndarray) -> Optional[np.ndarray]:
    """A stationary point of q on x0 + span(Z), or None when the reduced system is inconsistent."""
    if Z.shape[1] == 0:
        return x0
    A = Z.T @ qp.Q @ Z
    b = Z.T @ qp.gradient(x0)
    # singular values below RANK_TOL are treated as zero so flat directions get no step
    t, *_ = linalg.lstsq(A, -b, cond=settings.RANK_TOL)
    if np.max(np.abs(A @ t + b), initial=0.0) > settings.DEDUP_TOL * (1.0 + np.max(np.abs(b), initial=0.0)):
        return None
    x = x0 + Z @ t
    if np.max(np.abs(x)) > settings.ORACLE_MAX_NORM * (1.0 + np.max(np.abs(x0), initial=0.0)):
        logger.debug(f"rejected stationary point of norm {np.max(np.abs(x)):.3e}")
        return None
    return x


def minimize_on_affine(qp: QpInstance, x0, Z) -> Optional[Tuple[np.ndarray, float]]:
    """Minimizer and minimum of q on x0 + span(Z); None when q is unbounded below there."""
    x0 = np.asarray(x0, dtype=float)
    Z = np.asarray(Z, dtype=float).reshape(qp.n, -1)
    if Z.shape[1] and not is_psd(Z.T @ qp.Q @ Z):
        return None
    x = _stationary_point(qp, x0, Z)
    if x is None:
        return None
    return x, qp.objective(x)


def _directional_witness(qp: QpInstance, d: np.ndarray) -> Optional[np.ndarray]:
    """A point x ∈ F with (Qx + c)ᵀd < 0, from the LP min (Qd)ᵀx over F."""
    P = qp.poly
    slope = qp.Q @ d
    outcome = solve_lp(P.feasibility_lp(slope))
    offset = float(qp.c @ d)
    tol = settings.HESSIAN_TOL * (1.0 + np.max(np.abs(slope), initial=0.0))
    if outcome.status == LpStatus.UNBOUNDED:
        x, ray = outcome.primal, outcome.ray
        value, rate = slope @ x + offset, slope @ ray
        step = max(0.0, (value + 1.0) / -rate)
        return x + step * ray
    if outcome.status == LpStatus.OPTIMAL and outcome.objective_value + offset < -tol:
        return outcome.primal
    return None


def _analyze_recession(qp: QpInstance, cone: ConeGenerators,
                       witnesses: List[np.ndarray]) -> Tuple[Optional[Tuple[np.ndarray, np.ndarray]], bool]:
    """
    Returns (unbounded witness or None, boundedness certified). Boundedness is
    certified when Q is PSD on span(F∞) and no zero-curvature direction descends,
    or when the generator Gram matrix is entrywise nonnegative (copositivity).
    """
    gens = cone.generators
    if gens.shape[1] == 0:
        return None, True
    tol = settings.HESSIAN_TOL
    x0 = feasible_point(qp.poly)
    gram = gens.T @ qp.Q @ gens
    norms = np.sum(gens * gens, axis=0)
    scaled = gram / np.sqrt(np.outer(norms, norms))

    for j in range(gens.shape[1]):
        d = gens[:, j]
        if scaled[j, j] < -tol:
            return (x0, d), False
        if abs(scaled[j, j]) <= tol:
            x = _directional_witness(qp, d)
            if x is not None:
                return (x, d), False
    for i, j in itertools.combinations(range(gens.shape[1]), 2):
        if scaled[i, j] < -np.sqrt(max(scaled[i, i], 0.0) * max(scaled[j, j], 0.0)) - tol:
            if gram[j, j] > 0:
                beta = -gram[i, j] / gram[j, j]
            else:
                beta = (abs(gram[i, i]) + 1.0) / (-2.0 * gram[i, j])
            d = gens[:, i] + beta * gens[:, j]
            if d @ qp.Q @ d < 0:
                return (x0, d), False

    Z = linalg.orth(gens)
    A = Z.T @ qp.Q @ Z
    if is_psd(A):
        eigval, eigvec = linalg.eigh(0.5 * (A + A.T))
        flat = eigvec[:, np.abs(eigval) <= tol * max(1.0, np.max(np.abs(eigval)))]
        if flat.shape[1] == 0:
            return None, True
        basis = Z @ flat
        P = qp.poly
        lhs = np.vstack([P.G.T @ basis, basis, -basis])
        rhs = np.concatenate([np.zeros(P.m), np.ones(2 * qp.n)])
        for v in witnesses:
            outcome = solve_lp(LpProblem.build(basis.T @ qp.gradient(v), ineq_lhs=lhs, ineq_rhs=rhs))
            if outcome.status == LpStatus.OPTIMAL and outcome.objective_value < -tol:
                return (v, basis @ outcome.primal), False
        return None, True
    if np.all(scaled >= -tol):
        return None, True
    return None, False


def qp_unbounded_witness(qp: QpInstance) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """(x̂, d̂) with x̂ ∈ F, d̂ ∈ F∞ along which q decreases without bound, if one is found."""
    try:
        feasible_point(qp.poly)
    except EmptyPolyhedron:
        return None
    cone = extreme_rays(qp.poly)
    if cone.generators.shape[1] == 0:
        return None
    witnesses = [face.witness for face in enumerate_minimal_faces(qp.poly)]
    witness, _ = _analyze_recession(qp, cone, witnesses)
    return witness


def _independent_subsets(qp: QpInstance):
    P = qp.poly
    rank_H = numerical_rank(P.H) if P.p else 0
    max_size = min(P.m, P.n - rank_H)
    total = sum(comb(P.m, k) for k in range(max_size + 1))
    if total > settings.ORACLE_MAX_FACES:
        raise ScaleLimit(f"{total} candidate faces exceed the limit of {settings.ORACLE_MAX_FACES}")
    for k in range(max_size + 1):
        for subset in itertools.combinations(range(P.m), k):
            yield subset, rank_H + k


def global_min_qp(qp: QpInstance) -> GlobalQpResult:
    P = qp.poly
    try:
        feasible_point(P)
    except EmptyPolyhedron:
        logger.info("oracle: feasible region is empty")
        return GlobalQpResult(status=OracleStatus.INFEASIBLE, value=np.inf)

    cone = extreme_rays(P)
    witnesses = [face.witness for face in enumerate_minimal_faces(P)]
    witness, bounded = _analyze_recession(qp, cone, witnesses)
    if witness is not None:
        logger.info("oracle: objective is unbounded below")
        return GlobalQpResult(status=OracleStatus.UNBOUNDED, value=-np.inf, unbounded_witness=witness)

    best_x, best_value = None, np.inf
    for subset, rank in _independent_subsets(qp):
        idx = list(subset)
        M = np.vstack([P.G[:, idx].T, P.H.T])
        if numerical_rank(M) < rank:
            continue
        x0 = min_norm_solution(M, np.concatenate([P.g[idx], P.h]), P.n)
        if x0 is None:
            continue
        x = _stationary_point(qp, x0, null_basis(M, P.n))
        if x is None or not P.contains(x):
            continue
        value = qp.objective(x)
        if best_x is None or value < best_value - 1e-12 * (1.0 + abs(best_value)):
            best_x, best_value = x, value

    if best_x is None:
        best_x = feasible_point(P)
        best_value = qp.objective(best_x)
        bounded = False
    active = tuple(active_set(P, best_x))
    dim = P.n - numerical_rank(np.hstack([P.G[:, list(active)], P.H]))
    face = FaceDescriptor(active_ineq=active, dim=dim, witness=best_x)
    status = OracleStatus.OPTIMAL if bounded else OracleStatus.INCOMPLETE
    if not bounded:
        logger.warning("oracle: boundedness of the objective could not be certified; verdict is incomplete")
    logger.info(f"oracle: {status.value} value {best_value:.12g}")
    return GlobalQpResult(status=status, value=best_value, argmin=best_x, attaining_face=face)
