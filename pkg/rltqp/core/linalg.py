"""Small dense linear-algebra helpers shared by the enumeration routines."""
import logging
from typing import Iterable, List, Optional

import numpy as np
from scipy import linalg

from .config import settings
from .errors import DimensionMismatch

logger = logging.getLogger(__name__)


def as_matrix(values, rows: int, cols: int, name: str) -> np.ndarray:
    """Coerce to a float matrix of the given shape; empty inputs become rows x 0 etc."""
    arr = np.asarray(values if values is not None else [], dtype=float)
    if arr.size == 0:
        return np.zeros((rows, cols))
    if arr.ndim == 1 and (rows == 1 or cols == 1):
        arr = arr.reshape(rows, cols)
    if arr.shape != (rows, cols):
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {(rows, cols)}")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def numerical_rank(M: np.ndarray, tol: Optional[float] = None) -> int:
    """Rank from column-pivoted QR: pivots below tol times the largest pivot are zero."""
    tol = settings.RANK_TOL if tol is None else tol
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    R = linalg.qr(M, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.sum(diag > tol * diag[0]))


def null_basis(M: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis (columns) of {x in R^n : M x = 0}; M may have no rows."""
    M = np.asarray(M, dtype=float).reshape(-1, n)
    if M.shape[0] == 0:
        return np.eye(n)
    return linalg.null_space(M, rcond=settings.RANK_TOL)


def min_norm_solution(M: np.ndarray, rhs: np.ndarray, n: int) -> Optional[np.ndarray]:
    """Least-norm solution of M x = rhs, or None when the system is inconsistent."""
    M = np.asarray(M, dtype=float).reshape(-1, n)
    rhs = np.asarray(rhs, dtype=float).reshape(-1)
    if M.shape[0] == 0:
        return np.zeros(n)
    x, *_ = linalg.lstsq(M, rhs)
    scale = 1.0 + np.max(np.abs(rhs), initial=0.0)
    if np.max(np.abs(M @ x - rhs), initial=0.0) > settings.DEDUP_TOL * scale:
        return None
    return x


def normalize_direction(d: np.ndarray, orient: bool = True) -> np.ndarray:
    """Scale to unit max-norm; with orient, also make the first nonzero entry positive."""
    d = np.asarray(d, dtype=float)
    norm = np.max(np.abs(d), initial=0.0)
    if norm == 0.0:
        return d
    d = d / norm
    d[np.abs(d) < settings.RANK_TOL] = 0.0
    if not orient:
        return d
    first = d[np.flatnonzero(d)[0]]
    return d if first > 0 else -d


def lex_key(v: np.ndarray) -> tuple:
    return tuple(np.round(np.asarray(v, dtype=float), 9) + 0.0)


def dedup_points(points: Iterable[np.ndarray], tol: Optional[float] = None) -> List[np.ndarray]:
    """Snap round-off to zero, drop points within tol (max-norm) of an earlier one, sort lexicographically."""
    tol = settings.DEDUP_TOL if tol is None else tol
    kept: List[np.ndarray] = []
    for p in points:
        p = np.where(np.abs(p) <= settings.FEASIBILITY_TOL, 0.0, p)
        if all(np.max(np.abs(p - q), initial=0.0) > tol for q in kept):
            kept.append(p)
    return sorted(kept, key=lex_key)


def is_psd(M: np.ndarray, tol: Optional[float] = None) -> bool:
    tol = settings.HESSIAN_TOL if tol is None else tol
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return True
    eig = linalg.eigvalsh(0.5 * (M + M.T))
    return bool(eig[0] >= -tol * max(1.0, np.max(np.abs(eig))))
