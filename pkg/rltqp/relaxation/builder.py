"""
The RLT relaxation as a dense LP over z = (x, flat X).

Equality rows: Hᵀx = h, then HᵀX = hxᵀ (j-major).
Inequality rows: Gᵀx ≤ g, then for i ≤ i′ the product row
    −½[(GᵀXG)_{ii′} − (g_{i′}G_i + g_iG_{i′})ᵀx] ≤ ½ g_i g_{i′},
i.e. one half of (GᵀXG − Gᵀxgᵀ − gxᵀG + ggᵀ)_{ii′} ≥ 0. The factor ½ makes
the LP row duals coincide with the dual multipliers (u, w, R, S).
"""
import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..core.config import settings
from ..duality.multipliers import DualSolution
from ..lp.problem import LpOutcome, LpProblem, LpStatus
from ..lp.simplex import solve_lp
from ..schemas.base import ArrayModel
from .instance import LiftedDirection, LiftedPoint, QpInstance
from .symindex import SymIndex

logger = logging.getLogger(__name__)


class RowLabel(NamedTuple):
    kind: str  # "ineq", "eq", "eqprod" or "prod"
    i: int
    j: int = -1


class RltRelaxation(ArrayModel):
    qp: QpInstance
    lp: LpProblem
    sym: SymIndex
    eq_labels: Tuple[RowLabel, ...]
    ineq_labels: Tuple[RowLabel, ...]

    @property
    def n(self) -> int:
        return self.qp.n

    def flatten(self, x, X) -> np.ndarray:
        return np.concatenate([np.asarray(x, dtype=float), self.sym.to_flat(X)])

    def point(self, z: np.ndarray) -> LiftedPoint:
        return LiftedPoint(x=z[:self.n], X=self.sym.from_flat(z[self.n:]))

    def direction(self, z: np.ndarray) -> LiftedDirection:
        return LiftedDirection(d=z[:self.n], D=self.sym.from_flat(z[self.n:]))

    def objective_at(self, pt: LiftedPoint) -> float:
        return float(self.lp.objective @ self.flatten(pt.x, pt.X))


def _product_row(sym: SymIndex, Gi, Gk, gi: float, gk: float) -> np.ndarray:
    x_part = 0.5 * (gk * Gi + gi * Gk)
    X_part = -0.5 * sym.inner_coefficients(np.outer(Gi, Gk))
    return np.concatenate([x_part, X_part])


def build_rlt(qp: QpInstance) -> RltRelaxation:
    P = qp.poly
    n, m, p = P.n, P.m, P.p
    sym = SymIndex(n)
    N = n + sym.dim

    objective = np.concatenate([qp.c, sym.inner_coefficients(0.5 * qp.Q)])

    eq_rows: List[np.ndarray] = []
    eq_rhs: List[float] = []
    eq_labels: List[RowLabel] = []
    for j in range(p):
        eq_rows.append(np.concatenate([P.H[:, j], np.zeros(sym.dim)]))
        eq_rhs.append(P.h[j])
        eq_labels.append(RowLabel("eq", j))
    for j in range(p):
        for k in range(n):
            M = np.zeros((n, n))
            M[:, k] = P.H[:, j]
            x_part = np.zeros(n)
            x_part[k] = -P.h[j]
            eq_rows.append(np.concatenate([x_part, sym.inner_coefficients(M)]))
            eq_rhs.append(0.0)
            eq_labels.append(RowLabel("eqprod", j, k))

    in_rows: List[np.ndarray] = []
    in_rhs: List[float] = []
    in_labels: List[RowLabel] = []
    for i in range(m):
        in_rows.append(np.concatenate([P.G[:, i], np.zeros(sym.dim)]))
        in_rhs.append(P.g[i])
        in_labels.append(RowLabel("ineq", i))
    for i in range(m):
        for k in range(i, m):
            in_rows.append(_product_row(sym, P.G[:, i], P.G[:, k], P.g[i], P.g[k]))
            in_rhs.append(0.5 * P.g[i] * P.g[k])
            in_labels.append(RowLabel("prod", i, k))

    lp = LpProblem.build(
        objective,
        np.array(eq_rows).reshape(-1, N), np.array(eq_rhs),
        np.array(in_rows).reshape(-1, N), np.array(in_rhs),
    )
    logger.debug(f"built RLT with {N} variables, {len(eq_rows)} equality and {len(in_rows)} inequality rows")
    return RltRelaxation(qp=qp, lp=lp, sym=sym, eq_labels=tuple(eq_labels), ineq_labels=tuple(in_labels))


def dual_from_outcome(rel: RltRelaxation, outcome: LpOutcome) -> DualSolution:
    """Assemble (u, w, R, S) from the LP row duals following the row labels."""
    P = rel.qp.poly
    u, w = np.zeros(P.m), np.zeros(P.p)
    R, S = np.zeros((P.p, P.n)), np.zeros((P.m, P.m))
    for label, y in zip(rel.eq_labels, outcome.dual_eq):
        if label.kind == "eq":
            w[label.i] = y
        else:
            R[label.i, label.j] = y
    for label, lam in zip(rel.ineq_labels, outcome.dual_ineq):
        if label.kind == "ineq":
            u[label.i] = lam
        elif label.i == label.j:
            S[label.i, label.i] = lam
        else:
            S[label.i, label.j] = S[label.j, label.i] = 0.5 * lam
    return DualSolution(u=u, w=w, R=R, S=S)


class RltSolution(ArrayModel):
    status: LpStatus
    value: float
    point: Optional[LiftedPoint] = None
    dual: Optional[DualSolution] = None
    ray: Optional[LiftedDirection] = None
    outcome: LpOutcome


def solve_rlt(qp: QpInstance, rel: Optional[RltRelaxation] = None) -> RltSolution:
    rel = build_rlt(qp) if rel is None else rel
    outcome = solve_lp(rel.lp)
    logger.info(f"RLT relaxation {outcome.status.value} ({outcome.pivots} pivots)")
    if outcome.status == LpStatus.OPTIMAL:
        return RltSolution(status=outcome.status, value=outcome.objective_value,
                           point=rel.point(outcome.primal), dual=dual_from_outcome(rel, outcome),
                           outcome=outcome)
    if outcome.status == LpStatus.UNBOUNDED:
        return RltSolution(status=outcome.status, value=-np.inf, point=rel.point(outcome.primal),
                           ray=rel.direction(outcome.ray), outcome=outcome)
    return RltSolution(status=outcome.status, value=np.inf, outcome=outcome)


def lifted_residuals(qp: QpInstance, x, X) -> Dict[str, np.ndarray]:
    """
    Constraint residuals of the relaxation at (x, X): "ineq" = g − Gᵀx and
    "prod" = GᵀXG − Gᵀxgᵀ − gxᵀG + ggᵀ must be ≥ 0, "eq" = Hᵀx − h and
    "eqprod" = HᵀX − hxᵀ must vanish.
    """
    P = qp.poly
    x, X = np.asarray(x, dtype=float), np.asarray(X, dtype=float)
    Gx = P.G.T @ x
    return {
        "ineq": P.g - Gx,
        "eq": P.H.T @ x - P.h,
        "eqprod": P.H.T @ X - np.outer(P.h, x),
        "prod": P.G.T @ X @ P.G - np.outer(Gx, P.g) - np.outer(P.g, Gx) + np.outer(P.g, P.g),
    }


def is_feasible_lifted(qp: QpInstance, pt: LiftedPoint, tol: Optional[float] = None) -> bool:
    tol = settings.FEASIBILITY_TOL if tol is None else tol
    res = lifted_residuals(qp, pt.x, pt.X)
    scale = 1.0 + np.max(np.abs(qp.poly.g), initial=0.0) ** 2 + np.max(np.abs(qp.poly.h), initial=0.0)
    if np.any(res["ineq"] < -tol * scale) or np.any(res["prod"] < -tol * scale):
        return False
    return not (np.any(np.abs(res["eq"]) > tol * scale) or np.any(np.abs(res["eqprod"]) > tol * scale))
