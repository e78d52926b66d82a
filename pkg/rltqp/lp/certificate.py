import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from ..core.config import settings
from .problem import LpOutcome, LpProblem, LpStatus

logger = logging.getLogger(__name__)


class CertificateCheck(BaseModel):
    ok: bool
    reasons: List[str] = []

    def __bool__(self) -> bool:
        return self.ok


def _primal_violations(p: LpProblem, z: np.ndarray, tol: float) -> List[str]:
    reasons = []
    if p.num_eq and np.max(np.abs(p.eq_lhs @ z - p.eq_rhs) / (1.0 + np.abs(p.eq_rhs))) > tol:
        reasons.append("primal feasibility (equalities)")
    if p.num_ineq and np.max((p.ineq_lhs @ z - p.ineq_rhs) / (1.0 + np.abs(p.ineq_rhs))) > tol:
        reasons.append("primal feasibility (inequalities)")
    finite = np.isfinite(p.lower_bounds)
    if np.any(z[finite] < p.lower_bounds[finite] - tol * (1.0 + np.abs(p.lower_bounds[finite]))):
        reasons.append("primal feasibility (bounds)")
    return reasons


def _dual_violations(p: LpProblem, o: LpOutcome, objective: np.ndarray, tol: float) -> List[str]:
    """Sign and stationarity of (dual_eq, dual_ineq, reduced_costs) against the given objective."""
    reasons = []
    finite = np.isfinite(p.lower_bounds)
    if np.any(o.dual_ineq < -tol) or np.any(o.reduced_costs[finite] < -tol):
        reasons.append("dual sign")
    if np.any(np.abs(o.reduced_costs[~finite]) > tol):
        reasons.append("dual sign (free variable)")
    stationarity = objective - p.eq_lhs.T @ o.dual_eq + p.ineq_lhs.T @ o.dual_ineq - o.reduced_costs
    scale = 1.0 + np.max(np.abs(objective), initial=0.0)
    if np.max(np.abs(stationarity), initial=0.0) > tol * scale:
        reasons.append("dual feasibility")
    return reasons


def verify_certificate(p: LpProblem, o: LpOutcome, tol: Optional[float] = None) -> CertificateCheck:
    """
    Independently re-check a solver outcome.

    Optimal: primal feasibility, dual feasibility, complementary slackness and
    strong duality. Unbounded: a feasible point plus a recession ray with negative
    objective slope. Infeasible: Farkas multipliers with positive dual value.
    """
    tol = settings.CERTIFICATE_TOL if tol is None else tol
    reasons: List[str] = []

    if o.status == LpStatus.OPTIMAL:
        z = o.primal
        reasons += _primal_violations(p, z, tol)
        reasons += _dual_violations(p, o, p.objective, tol)
        slack = p.ineq_rhs - p.ineq_lhs @ z
        finite = np.isfinite(p.lower_bounds)
        gap = z[finite] - p.lower_bounds[finite]
        if np.any(np.abs(o.dual_ineq * slack) > tol * (1.0 + np.abs(p.ineq_rhs))) or \
                np.any(np.abs(o.reduced_costs[finite] * gap) > tol * (1.0 + np.abs(p.lower_bounds[finite]))):
            reasons.append("complementary slackness")
        primal_value = float(p.objective @ z)
        if abs(primal_value - o.dual_value(p)) > tol * (1.0 + abs(primal_value)):
            reasons.append("strong duality")

    elif o.status == LpStatus.UNBOUNDED:
        r = o.ray
        if r is None or o.primal is None:
            reasons.append("missing ray")
        else:
            reasons += _primal_violations(p, o.primal, tol)
            finite = np.isfinite(p.lower_bounds)
            if (p.num_eq and np.max(np.abs(p.eq_lhs @ r)) > tol) or \
                    (p.num_ineq and np.max(p.ineq_lhs @ r) > tol) or np.any(r[finite] < -tol):
                reasons.append("ray")
            if p.objective @ r >= -tol:
                reasons.append("ray objective")

    else:
        if o.dual_eq is None:
            reasons.append("missing Farkas multipliers")
        else:
            reasons += _dual_violations(p, o, np.zeros(p.num_vars), tol)
            if o.dual_value(p) <= tol:
                reasons.append("Farkas value")

    if reasons:
        logger.debug(f"certificate rejected for {o.status.value} outcome: {', '.join(reasons)}")
    return CertificateCheck(ok=not reasons, reasons=reasons)
