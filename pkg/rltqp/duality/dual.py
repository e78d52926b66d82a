"""
The dual of the RLT relaxation

    max  −uᵀg + wᵀh − ½gᵀSg
    s.t. −Gu + Hw − Rᵀh − GSg = c
         RᵀHᵀ + HR + GSGᵀ = Q
         u ≥ 0, S ≥ 0

written as a minimization over (u, w, vec R, flat S) and the optimality
conditions pairing a lifted point with a multiplier set.
"""
import logging
from typing import Dict, Optional

import numpy as np

from ..core.config import settings
from ..core.errors import InfeasiblePoint
from ..lp.problem import LpProblem
from ..relaxation.builder import is_feasible_lifted, lifted_residuals
from ..relaxation.instance import LiftedPoint, QpInstance
from ..relaxation.symindex import SymIndex
from ..schemas.base import ArrayModel
from .multipliers import DualSolution

logger = logging.getLogger(__name__)


class DualProgram(ArrayModel):
    """The dual LP together with the layout needed to read multipliers off its variables."""
    lp: LpProblem
    m: int
    p: int
    n: int

    def unpack(self, z: np.ndarray) -> DualSolution:
        m, p, n = self.m, self.p, self.n
        u = z[:m]
        w = z[m:m + p]
        R = z[m + p:m + p + p * n].reshape(p, n)
        S = SymIndex(m).from_flat(z[m + p + p * n:])
        return DualSolution(u=u, w=w, R=R, S=S)


def build_dual(qp: QpInstance) -> DualProgram:
    P = qp.poly
    n, m, p = P.n, P.m, P.p
    sym_m, sym_n = SymIndex(m), SymIndex(n)
    nu, nw, nR, nS = m, p, p * n, sym_m.dim
    N = nu + nw + nR + nS
    r0, s0 = nu + nw, nu + nw + nR

    def R_col(j: int, a: int) -> int:
        return r0 + j * n + a

    # −Gu + Hw − Rᵀh − GSg = c
    lin = np.zeros((n, N))
    lin[:, :nu] = -P.G
    lin[:, nu:nu + nw] = P.H
    for a in range(n):
        for j in range(p):
            lin[a, R_col(j, a)] = -P.h[j]
        lin[a, s0:] = -sym_m.inner_coefficients(np.outer(P.G[a], P.g))

    # RᵀHᵀ + HR + GSGᵀ = Q on the upper triangle
    quad = np.zeros((sym_n.dim, N))
    for k in range(sym_n.dim):
        a, b = sym_n.pair(k)
        for j in range(p):
            quad[k, R_col(j, a)] += P.H[b, j]
            quad[k, R_col(j, b)] += P.H[a, j]
        quad[k, s0:] = sym_m.inner_coefficients(np.outer(P.G[a], P.G[b]))

    objective = np.zeros(N)
    objective[:nu] = P.g
    objective[nu:nu + nw] = -P.h
    objective[s0:] = 0.5 * sym_m.inner_coefficients(np.outer(P.g, P.g))

    lower = np.concatenate([np.zeros(nu), np.full(nw + nR, -np.inf), np.zeros(nS)])
    lp = LpProblem.build(objective, np.vstack([lin, quad]),
                         np.concatenate([qp.c, sym_n.to_flat(qp.Q)]), lower_bounds=lower)
    return DualProgram(lp=lp, m=m, p=p, n=n)


def dual_objective(qp: QpInstance, ds: DualSolution) -> float:
    P = qp.poly
    return float(-ds.u @ P.g + ds.w @ P.h - 0.5 * P.g @ ds.S @ P.g)


def optimality_residuals(qp: QpInstance, pt: LiftedPoint, ds: DualSolution) -> Dict[str, float]:
    """Largest violation of each optimality condition; "sign" covers u ≥ 0 and S ≥ 0."""
    P = qp.poly
    R = ds.R_for(P.n)
    res = lifted_residuals(qp, pt.x, pt.X)
    linear = -P.G @ ds.u + P.H @ ds.w - R.T @ P.h - P.G @ ds.S @ P.g - qp.c
    quadratic = R.T @ P.H.T + P.H @ R + P.G @ ds.S @ P.G.T - qp.Q
    return {
        "linear": float(np.max(np.abs(linear), initial=0.0)),
        "quadratic": float(np.max(np.abs(quadratic), initial=0.0)),
        "complementarity_u": float(abs(ds.u @ res["ineq"])),
        "complementarity_S": float(abs(np.sum(ds.S * res["prod"]))),
        "sign": float(max(-np.min(ds.u, initial=0.0), -np.min(ds.S, initial=0.0))),
    }


def check_optimality(qp: QpInstance, pt: LiftedPoint, ds: DualSolution, tol: Optional[float] = None) -> bool:
    """
    True iff the multipliers certify pt as optimal for the relaxation: both
    stationarity blocks, complementarity of u and S, and u ≥ 0, S ≥ 0.
    """
    tol = settings.CERTIFICATE_TOL if tol is None else tol
    if not is_feasible_lifted(qp, pt, max(tol, settings.FEASIBILITY_TOL)):
        raise InfeasiblePoint("lifted point is not feasible for the relaxation")
    residuals = optimality_residuals(qp, pt, ds)
    scale = 1.0 + max(np.max(np.abs(qp.Q), initial=0.0), np.max(np.abs(qp.c), initial=0.0))
    failed = [name for name, value in residuals.items() if value > tol * scale]
    if failed:
        logger.debug(f"optimality conditions violated: {', '.join(failed)}")
    return not failed
