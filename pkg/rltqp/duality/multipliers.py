from typing import List

import numpy as np
from pydantic import model_validator

from ..core.config import settings
from ..core.errors import DimensionMismatch
from ..schemas.base import ArrayModel, FloatArray


class DualSolution(ArrayModel):
    """
    Multipliers (u, w, R, S) of the RLT dual: u for Gᵀx ≤ g, w for Hᵀx = h,
    R (p×n) for HᵀX = hxᵀ and S (m×m, symmetric) for the product block.

    Shapes and symmetry are enforced here; the sign conditions u ≥ 0, S ≥ 0 are
    checked by the optimality routines so that violations can be reported.
    """
    u: FloatArray
    w: FloatArray
    R: FloatArray
    S: FloatArray

    @model_validator(mode="after")
    def check_shapes(self) -> "DualSolution":
        m, p = self.u.shape[0], self.w.shape[0]
        if m == 0 and self.S.size == 0:
            object.__setattr__(self, "S", np.zeros((0, 0)))
        if self.S.shape != (m, m):
            raise DimensionMismatch(f"S has shape {self.S.shape}, expected {(m, m)}")
        if self.R.ndim != 2 and self.R.size == 0:
            object.__setattr__(self, "R", np.zeros((p, 0)))
        if self.R.ndim != 2 or self.R.shape[0] != p:
            raise DimensionMismatch(f"R has shape {self.R.shape}, expected p={p} rows")
        if np.max(np.abs(self.S - self.S.T), initial=0.0) > 1e-12 * (1.0 + np.max(np.abs(self.S), initial=0.0)):
            raise DimensionMismatch("S must be symmetric")
        return self

    def R_for(self, n: int) -> np.ndarray:
        """R as a p×n matrix; an empty R stands for the p = 0 case."""
        if self.R.size == 0:
            return np.zeros((self.w.shape[0], n))
        return self.R

    @classmethod
    def zeros(cls, m: int, p: int, n: int) -> "DualSolution":
        return cls(u=np.zeros(m), w=np.zeros(p), R=np.zeros((p, n)), S=np.zeros((m, m)))

    def sign_violations(self, tol: float = None) -> List[str]:
        tol = settings.CERTIFICATE_TOL if tol is None else tol
        reasons = []
        if np.any(self.u < -tol):
            reasons.append("u has negative entries")
        if np.any(self.S < -tol):
            reasons.append("S has negative entries")
        return reasons
