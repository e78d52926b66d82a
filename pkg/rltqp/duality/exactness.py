import logging
from enum import Enum
from typing import Optional

import numpy as np

from ..core.config import settings
from ..core.errors import NumericalBreakdown, OracleIncomplete
from ..lp.problem import LpStatus
from ..oracle.global_qp import OracleStatus, global_min_qp, minimize_on_affine
from ..polyhedra.enumeration import enumerate_minimal_faces, lineality_basis
from ..polyhedra.polyhedron import FaceDescriptor, feasible_point
from ..relaxation.builder import solve_rlt
from ..relaxation.instance import QpInstance
from ..schemas.base import ArrayModel, OptionalFloatArray

logger = logging.getLogger(__name__)


class ExactnessStatus(str, Enum):
    EXACT = "Exact"
    INEXACT = "Inexact"
    UNBOUNDED_RELAXATION = "UnboundedRelaxation"
    UNBOUNDED_QP = "UnboundedQp"


class ExactnessReport(ArrayModel):
    status: ExactnessStatus
    rlt_bound: float
    qp_value: Optional[float] = None
    witness: OptionalFloatArray = None
    witness_face: Optional[FaceDescriptor] = None


def is_exact_gap(rlt_bound: float, qp_value: float) -> bool:
    return abs(rlt_bound - qp_value) <= settings.EXACTNESS_RTOL * (1.0 + abs(qp_value))


def _best_minimal_face(qp: QpInstance):
    """Minimizer of q over the union of minimal faces (each an affine set inside F)."""
    L = lineality_basis(qp.poly)
    best = None
    for face in enumerate_minimal_faces(qp.poly):
        found = minimize_on_affine(qp, face.witness, L)
        if found is None:
            continue
        x, value = found
        if best is None or value < best[1] - 1e-12 * (1.0 + abs(best[1])):
            best = (x, value, face)
    return best


def certify_exactness(qp: QpInstance) -> ExactnessReport:
    """
    Compare the relaxation bound with the global optimum. When they agree, the
    minimizer of q over the minimal faces is returned as the witness.
    Raises EmptyPolyhedron for an empty F, OracleIncomplete when the oracle
    cannot settle a finite relaxation bound, and NumericalBreakdown when the two
    values agree but no minimal face attains them.
    """
    feasible_point(qp.poly)
    relaxation = solve_rlt(qp)
    oracle = global_min_qp(qp)

    if relaxation.status == LpStatus.UNBOUNDED:
        if oracle.status == OracleStatus.UNBOUNDED:
            logger.info("certify: relaxation and QP are both unbounded")
            return ExactnessReport(status=ExactnessStatus.UNBOUNDED_QP, rlt_bound=-np.inf, qp_value=-np.inf)
        qp_value = oracle.value if oracle.status == OracleStatus.OPTIMAL else None
        logger.info("certify: relaxation is unbounded")
        return ExactnessReport(status=ExactnessStatus.UNBOUNDED_RELAXATION, rlt_bound=-np.inf, qp_value=qp_value)

    if oracle.status == OracleStatus.UNBOUNDED:
        logger.warning("certify: oracle reports an unbounded QP under a finite relaxation bound")
        return ExactnessReport(status=ExactnessStatus.UNBOUNDED_QP, rlt_bound=relaxation.value, qp_value=-np.inf)

    best = _best_minimal_face(qp)
    if oracle.status == OracleStatus.INCOMPLETE:
        # a minimal face attaining the bound settles ℓ* without the oracle
        if best is None or not is_exact_gap(relaxation.value, best[1]):
            raise OracleIncomplete("the global optimum could not be certified on this unbounded region")
        qp_value = best[1]
    else:
        qp_value = oracle.value

    if not is_exact_gap(relaxation.value, qp_value):
        logger.info(f"certify: Inexact (relaxation {relaxation.value:.12g}, optimum {qp_value:.12g})")
        return ExactnessReport(status=ExactnessStatus.INEXACT, rlt_bound=relaxation.value, qp_value=qp_value)

    if best is None or not is_exact_gap(relaxation.value, best[1]):
        found = "none" if best is None else f"{best[1]:.12g}"
        raise NumericalBreakdown(f"bound {relaxation.value:.12g} matches the optimum but no minimal face attains it "
                                 f"(best {found})")
    witness, _, minimal = best
    face = FaceDescriptor(active_ineq=minimal.active_ineq, dim=minimal.dim, witness=witness)
    logger.info(f"certify: Exact at value {qp_value:.12g}")
    return ExactnessReport(status=ExactnessStatus.EXACT, rlt_bound=relaxation.value, qp_value=qp_value,
                           witness=witness, witness_face=face)
