import logging
from typing import List, Optional

import numpy as np

from ..core.config import settings
from ..core.errors import InfeasiblePoint, ScaleLimit
from ..core.linalg import dedup_points, min_norm_solution, numerical_rank
from ..polyhedra.enumeration import guarded_subsets
from .builder import RltRelaxation
from .instance import LiftedPoint

logger = logging.getLogger(__name__)


def _row_feasible(rel: RltRelaxation, z: np.ndarray, tol: float) -> bool:
    lp = rel.lp
    if lp.num_eq and np.any(np.abs(lp.eq_lhs @ z - lp.eq_rhs) > tol * (1.0 + np.abs(lp.eq_rhs))):
        return False
    return not (lp.num_ineq and np.any(lp.ineq_lhs @ z - lp.ineq_rhs > tol * (1.0 + np.abs(lp.ineq_rhs))))


def is_vertex_of_lifted(pt: LiftedPoint, rel: RltRelaxation, tol: Optional[float] = None) -> bool:
    """True iff the rows of the relaxation active at pt have full rank in flat coordinates."""
    tol = settings.FEASIBILITY_TOL if tol is None else tol
    lp = rel.lp
    z = rel.flatten(pt.x, pt.X)
    if not _row_feasible(rel, z, tol):
        raise InfeasiblePoint("point violates the relaxation constraints")
    slack = lp.ineq_rhs - lp.ineq_lhs @ z
    active = np.abs(slack) <= tol * (1.0 + np.abs(lp.ineq_rhs))
    rows = np.vstack([lp.eq_lhs, lp.ineq_lhs[active]])
    return numerical_rank(rows) == lp.num_vars


def enumerate_lifted_vertices(rel: RltRelaxation) -> List[LiftedPoint]:
    """Brute-force active-set enumeration of the vertices of the relaxation polyhedron."""
    lp = rel.lp
    N = lp.num_vars
    if N > settings.LIFTED_FLAT_LIMIT:
        raise ScaleLimit(f"flat dimension {N} exceeds {settings.LIFTED_FLAT_LIMIT}")
    eq_rank = numerical_rank(lp.eq_lhs) if lp.num_eq else 0
    tol = settings.FEASIBILITY_TOL
    found = []
    for subset in guarded_subsets(lp.num_ineq, N - eq_rank, "lifted vertex enumeration"):
        idx = list(subset)
        M = np.vstack([lp.eq_lhs, lp.ineq_lhs[idx]])
        if numerical_rank(M) < N:
            continue
        z = min_norm_solution(M, np.concatenate([lp.eq_rhs, lp.ineq_rhs[idx]]), N)
        if z is not None and _row_feasible(rel, z, tol):
            found.append(z)
    vertices = [rel.point(z) for z in dedup_points(found)]
    logger.info(f"enumerated {len(vertices)} vertices of the lifted polyhedron")
    return vertices
