"""
Dense linear programs in the form

    minimize  objectiveᵀz
    s.t.      eq_lhs z = eq_rhs,  ineq_lhs z ≤ ineq_rhs,  z ≥ lower_bounds

and the outcome records produced by the simplex solver.

Dual convention: objective − eq_lhsᵀ·dual_eq + ineq_lhsᵀ·dual_ineq = reduced_costs,
with dual_ineq ≥ 0, reduced_costs ≥ 0 on finitely bounded variables and 0 on free
ones. The dual objective is eq_rhsᵀdual_eq − ineq_rhsᵀdual_ineq + Σ lower·reduced.
"""
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import model_validator

from ..core.errors import DimensionMismatch
from ..schemas.base import ArrayModel, FloatArray, OptionalFloatArray


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class LpProblem(ArrayModel):
    objective: FloatArray
    eq_lhs: FloatArray
    eq_rhs: FloatArray
    ineq_lhs: FloatArray
    ineq_rhs: FloatArray
    lower_bounds: FloatArray

    @classmethod
    def build(cls, objective, eq_lhs=None, eq_rhs=None, ineq_lhs=None, ineq_rhs=None,
              lower_bounds=None) -> "LpProblem":
        """Assemble a problem, filling absent blocks with empty matrices. Variables are free by default."""
        objective = np.asarray(objective, dtype=float).reshape(-1)
        n = objective.size

        def block(lhs, rhs):
            if lhs is None or np.size(lhs) == 0:
                return np.zeros((0, n)), np.zeros(0)
            return np.asarray(lhs, dtype=float).reshape(-1, n), np.asarray(rhs, dtype=float).reshape(-1)

        A_eq, b_eq = block(eq_lhs, eq_rhs)
        A_in, b_in = block(ineq_lhs, ineq_rhs)
        lb = np.full(n, -np.inf) if lower_bounds is None else np.asarray(lower_bounds, dtype=float)
        return cls(objective=objective, eq_lhs=A_eq, eq_rhs=b_eq, ineq_lhs=A_in,
                   ineq_rhs=b_in, lower_bounds=lb)

    @model_validator(mode="after")
    def check_shapes(self) -> "LpProblem":
        n = self.objective.shape[0]
        if self.eq_lhs.shape != (self.eq_rhs.shape[0], n):
            raise DimensionMismatch(f"eq_lhs shape {self.eq_lhs.shape} does not match {n} variables")
        if self.ineq_lhs.shape != (self.ineq_rhs.shape[0], n):
            raise DimensionMismatch(f"ineq_lhs shape {self.ineq_lhs.shape} does not match {n} variables")
        if self.lower_bounds.shape != (n,):
            raise DimensionMismatch("lower_bounds must have one entry per variable")
        return self

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def num_eq(self) -> int:
        return self.eq_rhs.shape[0]

    @property
    def num_ineq(self) -> int:
        return self.ineq_rhs.shape[0]


class LpOutcome(ArrayModel):
    """
    Result of solve_lp.

    Optimal: primal, duals and reduced costs form a certificate.
    Unbounded: primal is a feasible point and ray an improving direction.
    Infeasible: the duals are Farkas multipliers (zero objective, positive dual value).
    """
    status: LpStatus
    primal: OptionalFloatArray = None
    objective_value: float = np.nan
    dual_eq: OptionalFloatArray = None
    dual_ineq: OptionalFloatArray = None
    reduced_costs: OptionalFloatArray = None
    ray: OptionalFloatArray = None
    pivots: int = 0

    def dual_value(self, problem: LpProblem) -> float:
        lb = problem.lower_bounds
        finite = np.isfinite(lb)
        return float(problem.eq_rhs @ self.dual_eq - problem.ineq_rhs @ self.dual_ineq
                     + lb[finite] @ self.reduced_costs[finite])
