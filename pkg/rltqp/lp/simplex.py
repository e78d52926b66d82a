"""Two-phase dense tableau simplex."""
import logging
from typing import Optional, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import NumericalBreakdown
from .problem import LpOutcome, LpProblem, LpStatus

logger = logging.getLogger(__name__)


def clip_round_off(values: np.ndarray, what: str) -> np.ndarray:
    """Zero negative entries that are round-off; larger violations are kept and logged."""
    values = np.asarray(values, dtype=float)
    tol = settings.CERTIFICATE_TOL * (1.0 + np.max(np.abs(values), initial=0.0))
    if np.any(values < -tol):
        logger.warning(f"{what} has entries down to {values.min():.3e}; leaving them for the certificate check")
    return np.where((values < 0.0) & (values >= -tol), 0.0, values)


class _StandardForm:
    """
    min cᵀs s.t. A s = b, s ≥ 0, b ≥ 0, built from an LpProblem.

    z = shift + to_original @ s[:num_struct]; finitely bounded variables are shifted,
    free ones split into a positive and a negative part. Inequality rows get a slack
    and every row with a negative right-hand side is flipped (row_sign = -1).
    """

    def __init__(self, problem: LpProblem):
        lb = problem.lower_bounds
        n = problem.num_vars
        finite = np.isfinite(lb)
        self.shift = np.where(finite, lb, 0.0)

        columns = []
        for j in range(n):
            columns.append((j, 1.0))
            if not finite[j]:
                columns.append((j, -1.0))
        self.num_struct = len(columns)
        self.to_original = np.zeros((n, self.num_struct))
        for k, (j, sign) in enumerate(columns):
            self.to_original[j, k] = sign

        me, mi = problem.num_eq, problem.num_ineq
        self.num_eq, self.num_ineq = me, mi
        self.num_rows = me + mi
        self.num_cols = self.num_struct + mi

        A_eq = problem.eq_lhs @ self.to_original
        A_in = problem.ineq_lhs @ self.to_original
        A = np.zeros((self.num_rows, self.num_cols))
        A[:me, :self.num_struct] = A_eq
        A[me:, :self.num_struct] = A_in
        A[me:, self.num_struct:] = np.eye(mi)
        b = np.concatenate([problem.eq_rhs - problem.eq_lhs @ self.shift,
                            problem.ineq_rhs - problem.ineq_lhs @ self.shift])
        self.row_sign = np.where(b < 0, -1.0, 1.0)
        self.A = A * self.row_sign[:, None]
        self.b = b * self.row_sign
        self.c = np.concatenate([problem.objective @ self.to_original, np.zeros(mi)])

    def original_point(self, s: np.ndarray) -> np.ndarray:
        return self.shift + self.to_original @ s[:self.num_struct]

    def original_direction(self, s: np.ndarray) -> np.ndarray:
        return self.to_original @ s[:self.num_struct]

    def original_duals(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Map standard-form row duals to (dual_eq, dual_ineq) of the original problem."""
        y_rows = self.row_sign * y
        return y_rows[:self.num_eq], -y_rows[self.num_eq:]


class SimplexSolver:
    """
    Dense two-phase primal simplex with one artificial variable per row.

    Pricing is Dantzig (most negative reduced cost, lowest index on ties); after
    2(m+n) consecutive degenerate pivots the solver switches to Bland's rule for
    the rest of the solve.
    """

    def __init__(self, problem: LpProblem, max_pivots: Optional[int] = None):
        self.problem = problem
        self.form = _StandardForm(problem)
        self.max_pivots = settings.MAX_PIVOTS if max_pivots is None else max_pivots
        self.pivot_tol = settings.PIVOT_TOL
        self.opt_tol = settings.LP_FEASIBILITY_TOL
        m, nc = self.form.num_rows, self.form.num_cols
        self.num_total = nc + m
        self.full_A = np.hstack([self.form.A, np.eye(m)])
        self.tableau = self.full_A.copy()
        self.rhs = self.form.b.copy()
        self.basis = list(range(nc, nc + m))
        self.barred = np.zeros(self.num_total, dtype=bool)
        self.pivots = 0
        self.degenerate_run = 0
        self.use_bland = False
        self.degeneracy_limit = 2 * (m + self.problem.num_vars)

    def _is_artificial(self, j: int) -> bool:
        return j >= self.form.num_cols

    def _pivot(self, row: int, col: int):
        p = self.tableau[row, col]
        if abs(p) < self.pivot_tol:
            raise NumericalBreakdown(f"pivot element {p:.3e} below tolerance")
        self.tableau[row] /= p
        self.rhs[row] /= p
        factor = self.tableau[:, col].copy()
        factor[row] = 0.0
        self.tableau -= np.outer(factor, self.tableau[row])
        self.rhs -= factor * self.rhs[row]
        self.rhs[np.abs(self.rhs) < 1e-13] = 0.0
        self.basis[row] = col
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise NumericalBreakdown(f"pivot limit {self.max_pivots} exceeded")

    def _choose_entering(self, d: np.ndarray) -> Optional[int]:
        candidates = np.flatnonzero((d < -self.opt_tol) & ~self.barred)
        if candidates.size == 0:
            return None
        if self.use_bland:
            return int(candidates[0])
        # argmin returns the first (lowest index) minimum
        return int(candidates[np.argmin(d[candidates])])

    def _choose_leaving(self, col: int) -> Optional[int]:
        column = self.tableau[:, col]
        rows = np.flatnonzero(column > self.pivot_tol)
        if rows.size == 0:
            return None
        ratios = self.rhs[rows] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
        # lowest basic index among ties (Bland's leaving rule, harmless under Dantzig)
        return int(min(ties, key=lambda r: self.basis[r]))

    def _run(self, cost: np.ndarray) -> Optional[int]:
        """Iterate to optimality for the given cost; returns the entering column of an unbounded ray."""
        while True:
            y = cost[self.basis] @ self.tableau[:, self.form.num_cols:] if self.form.num_rows else np.zeros(0)
            d = cost - y @ self.full_A if self.form.num_rows else cost.copy()
            col = self._choose_entering(d)
            if col is None:
                return None
            row = self._choose_leaving(col)
            if row is None:
                return col
            step = self.rhs[row] / self.tableau[row, col]
            if step <= self.pivot_tol:
                self.degenerate_run += 1
                if not self.use_bland and self.degenerate_run >= self.degeneracy_limit:
                    logger.debug(f"switching to Bland's rule after {self.degenerate_run} degenerate pivots")
                    self.use_bland = True
            else:
                self.degenerate_run = 0
            self._pivot(row, col)

    def _basis_duals(self, cost: np.ndarray) -> np.ndarray:
        m = self.form.num_rows
        if m == 0:
            return np.zeros(0)
        B = self.full_A[:, self.basis]
        try:
            return np.linalg.solve(B.T, cost[self.basis])
        except np.linalg.LinAlgError:
            return cost[self.basis] @ self.tableau[:, self.form.num_cols:]

    def _basic_solution(self) -> np.ndarray:
        x = np.zeros(self.num_total)
        m = self.form.num_rows
        if m:
            B = self.full_A[:, self.basis]
            try:
                xb = np.linalg.solve(B, self.form.b)
            except np.linalg.LinAlgError:
                xb = self.rhs.copy()
            x[self.basis] = clip_round_off(xb, "basic solution")
        return x

    def _drive_out_artificials(self):
        for row, col in enumerate(list(self.basis)):
            if not self._is_artificial(col):
                continue
            candidates = np.abs(self.tableau[row, :self.form.num_cols])
            j = int(np.argmax(candidates)) if candidates.size else 0
            if candidates.size and candidates[j] > self.pivot_tol:
                self._pivot(row, j)
            else:
                logger.debug(f"row {row} is redundant; artificial stays basic at zero")

    def solve(self) -> LpOutcome:
        form = self.form
        nc, m = form.num_cols, form.num_rows

        phase1_cost = np.concatenate([np.zeros(nc), np.ones(m)])
        self._run(phase1_cost)
        infeasibility = float(self.rhs @ phase1_cost[self.basis]) if m else 0.0
        if infeasibility > settings.LP_FEASIBILITY_TOL * (1.0 + np.max(np.abs(form.b), initial=0.0)):
            y = self._basis_duals(phase1_cost)
            dual_eq, dual_ineq = form.original_duals(y)
            p = self.problem
            reduced = -p.eq_lhs.T @ dual_eq + p.ineq_lhs.T @ dual_ineq
            logger.info(f"LP infeasible (phase-1 value {infeasibility:.3e}, {self.pivots} pivots)")
            return LpOutcome(status=LpStatus.INFEASIBLE, objective_value=np.inf, dual_eq=dual_eq,
                             dual_ineq=dual_ineq, reduced_costs=reduced, pivots=self.pivots)

        self._drive_out_artificials()
        self.barred[nc:] = True
        self.degenerate_run = 0

        phase2_cost = np.concatenate([form.c, np.zeros(m)])
        entering = self._run(phase2_cost)
        x_std = self._basic_solution()
        primal = form.original_point(x_std)

        if entering is not None:
            direction = np.zeros(self.num_total)
            direction[entering] = 1.0
            for row, col in enumerate(self.basis):
                direction[col] = -self.tableau[row, entering]
            ray = form.original_direction(direction)
            ray = ray / max(np.max(np.abs(ray)), 1e-300)
            logger.info(f"LP unbounded after {self.pivots} pivots")
            return LpOutcome(status=LpStatus.UNBOUNDED, primal=primal, objective_value=-np.inf,
                             ray=ray, pivots=self.pivots)

        y = self._basis_duals(phase2_cost)
        dual_eq, dual_ineq = form.original_duals(y)
        dual_ineq = clip_round_off(dual_ineq, "inequality duals")
        p = self.problem
        reduced = p.objective - p.eq_lhs.T @ dual_eq + p.ineq_lhs.T @ dual_ineq
        value = float(p.objective @ primal)
        logger.debug(f"LP optimal value {value:.12g} after {self.pivots} pivots")
        return LpOutcome(status=LpStatus.OPTIMAL, primal=primal, objective_value=value,
                         dual_eq=dual_eq, dual_ineq=dual_ineq, reduced_costs=reduced,
                         pivots=self.pivots)


def solve_lp(problem: LpProblem) -> LpOutcome:
    """Solve a dense LP to optimality, or report infeasibility or an unbounded ray."""
    return SimplexSolver(problem).solve()
