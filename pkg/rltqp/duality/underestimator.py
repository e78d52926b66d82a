"""
The convex underestimator ℓ_R(x̂) = cᵀx̂ + min{½⟨Q, X⟩ : (x̂, X) feasible for the relaxation}.
"""
import logging
from typing import Optional

import numpy as np

from ..core.errors import NotInF
from ..lp.problem import LpOutcome, LpProblem, LpStatus
from ..lp.simplex import solve_lp
from ..relaxation.builder import RltRelaxation, build_rlt, dual_from_outcome
from ..relaxation.instance import QpInstance
from ..schemas.base import ArrayModel, FloatArray

logger = logging.getLogger(__name__)


class AffinePiece(ArrayModel):
    slope: FloatArray
    intercept: float

    def __call__(self, x) -> float:
        return float(self.slope @ np.asarray(x, dtype=float) + self.intercept)


def parametric_lp(rel: RltRelaxation, x_hat: np.ndarray) -> LpProblem:
    """The relaxation with x fixed at x_hat: product rows only, x-columns moved to the right-hand side."""
    n = rel.n
    lp = rel.lp
    eq = np.array([label.kind == "eqprod" for label in rel.eq_labels], dtype=bool)
    ineq = np.array([label.kind == "prod" for label in rel.ineq_labels], dtype=bool)
    A_eq, A_in = lp.eq_lhs[eq], lp.ineq_lhs[ineq]
    b_eq = lp.eq_rhs[eq] - A_eq[:, :n] @ x_hat
    b_in = lp.ineq_rhs[ineq] - A_in[:, :n] @ x_hat
    return LpProblem.build(lp.objective[n:], A_eq[:, n:], b_eq, A_in[:, n:], b_in)


def _solve_parametric(qp: QpInstance, x_hat) -> tuple:
    x_hat = np.asarray(x_hat, dtype=float)
    if not qp.poly.contains(x_hat):
        raise NotInF("x_hat is not in the feasible region")
    rel = build_rlt(qp)
    outcome = solve_lp(parametric_lp(rel, x_hat))
    return rel, x_hat, outcome


def underestimator(qp: QpInstance, x_hat) -> float:
    """ℓ_R(x̂); -inf when the parametric LP is unbounded."""
    _, x_hat, outcome = _solve_parametric(qp, x_hat)
    if outcome.status == LpStatus.UNBOUNDED:
        return -np.inf
    return float(outcome.objective_value + qp.c @ x_hat)


def underestimator_piece(qp: QpInstance, x_hat) -> Optional[AffinePiece]:
    """
    The affine minorant x ↦ cᵀx + hᵀRx + gᵀSGᵀx − ½gᵀSg built from the optimal
    multipliers (R, S) at x̂. It touches ℓ_R at x̂ and stays below it on F.
    None when ℓ_R(x̂) = -inf.
    """
    rel, x_hat, outcome = _solve_parametric(qp, x_hat)
    if outcome.status != LpStatus.OPTIMAL:
        return None
    P = qp.poly
    full = LpOutcome(
        status=outcome.status,
        dual_eq=_scatter(rel.eq_labels, "eqprod", outcome.dual_eq),
        dual_ineq=_scatter(rel.ineq_labels, "prod", outcome.dual_ineq),
    )
    ds = dual_from_outcome(rel, full)
    R = ds.R_for(P.n)
    slope = qp.c + R.T @ P.h + P.G @ ds.S @ P.g
    return AffinePiece(slope=slope, intercept=float(-0.5 * P.g @ ds.S @ P.g))


def _scatter(labels, kind: str, values: np.ndarray) -> np.ndarray:
    """Place the duals of the selected rows back into a full-length vector."""
    full = np.zeros(len(labels))
    full[[k for k, label in enumerate(labels) if label.kind == kind]] = values
    return full
