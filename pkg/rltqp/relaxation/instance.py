import logging

import numpy as np
from pydantic import model_validator

from ..core.errors import DimensionMismatch
from ..polyhedra.polyhedron import Polyhedron
from ..schemas.base import ArrayModel, FloatArray

logger = logging.getLogger(__name__)

ASYMMETRY_WARNING_TOL = 1e-9


def _symmetric(M: np.ndarray, name: str) -> np.ndarray:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    asymmetry = np.max(np.abs(M - M.T), initial=0.0)
    if asymmetry > ASYMMETRY_WARNING_TOL:
        logger.warning(f"{name} is not symmetric (max asymmetry {asymmetry:.3e}); symmetrizing")
    S = 0.5 * (M + M.T)
    S.setflags(write=False)
    return S


class QpInstance(ArrayModel):
    """min ½xᵀQx + cᵀx over poly. Q is symmetrized by averaging."""
    Q: FloatArray
    c: FloatArray
    poly: Polyhedron

    @model_validator(mode="after")
    def check_shapes(self) -> "QpInstance":
        n = self.poly.n
        if self.Q.shape != (n, n) or self.c.shape != (n,):
            raise DimensionMismatch(f"Q {self.Q.shape} and c {self.c.shape} do not match n={n}")
        object.__setattr__(self, "Q", _symmetric(self.Q, "Q"))
        return self

    @property
    def n(self) -> int:
        return self.poly.n

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.Q @ x + self.c @ x)

    def gradient(self, x) -> np.ndarray:
        return self.Q @ np.asarray(x, dtype=float) + self.c


class LiftedPoint(ArrayModel):
    x: FloatArray
    X: FloatArray

    @model_validator(mode="after")
    def check_symmetric(self) -> "LiftedPoint":
        if self.X.shape != (self.x.shape[0],) * 2:
            raise DimensionMismatch(f"X has shape {self.X.shape} for x of length {self.x.shape[0]}")
        object.__setattr__(self, "X", _symmetric(self.X, "X"))
        return self


class LiftedDirection(ArrayModel):
    d: FloatArray
    D: FloatArray

    @model_validator(mode="after")
    def check_symmetric(self) -> "LiftedDirection":
        if self.D.shape != (self.d.shape[0],) * 2:
            raise DimensionMismatch(f"D has shape {self.D.shape} for d of length {self.d.shape[0]}")
        object.__setattr__(self, "D", _symmetric(self.D, "D"))
        return self


def lift(x) -> LiftedPoint:
    x = np.asarray(x, dtype=float)
    return LiftedPoint(x=x, X=np.outer(x, x))


def midpoint_lift(v1, v2) -> LiftedPoint:
    v1, v2 = np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)
    return LiftedPoint(x=0.5 * (v1 + v2), X=0.5 * (np.outer(v1, v2) + np.outer(v2, v1)))
