"""
Active-set enumeration of vertices, minimal faces and extreme rays.

Every routine walks the subsets of inequality indices of a fixed size, keeps the
subsets whose normals (together with H) reach the required rank, solves the
resulting equality system and filters by feasibility. Results are deduplicated
at DEDUP_TOL and returned in lexicographic order.
"""
import itertools
import logging
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import ScaleLimit
from ..core.linalg import dedup_points, min_norm_solution, normalize_direction, null_basis, numerical_rank
from ..lp.problem import LpProblem, LpStatus
from ..lp.simplex import solve_lp
from .polyhedron import ConeGenerators, FaceDescriptor, Polyhedron, active_set, constraint_rank, feasible_point

logger = logging.getLogger(__name__)


def guarded_subsets(m: int, k: int, what: str) -> Iterator[Tuple[int, ...]]:
    """All k-subsets of range(m); ScaleLimit when there are more than ENUMERATION_LIMIT."""
    if k < 0 or k > m:
        return iter(())
    count = comb(m, k)
    if count > settings.ENUMERATION_LIMIT:
        raise ScaleLimit(f"{what}: {count} active sets exceed the limit of {settings.ENUMERATION_LIMIT}")
    return itertools.combinations(range(m), k)


def _equality_system(P: Polyhedron, subset: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    idx = list(subset)
    M = np.vstack([P.G[:, idx].T, P.H.T])
    rhs = np.concatenate([P.g[idx], P.h])
    return M, rhs


def enumerate_vertices(P: Polyhedron) -> List[np.ndarray]:
    """All vertices of F in lexicographic order; empty when F has a line. EmptyPolyhedron when F is empty."""
    feasible_point(P)
    if constraint_rank(P) < P.n:
        logger.info("polyhedron contains a line; it has no vertices")
        return []
    k = P.n - numerical_rank(P.H)
    found = []
    for subset in guarded_subsets(P.m, k, "vertex enumeration"):
        M, rhs = _equality_system(P, subset)
        if numerical_rank(M) < P.n:
            continue
        x = min_norm_solution(M, rhs, P.n)
        if x is not None and P.contains(x):
            found.append(x)
    vertices = dedup_points(found)
    logger.info(f"enumerated {len(vertices)} vertices")
    return vertices


def enumerate_minimal_faces(P: Polyhedron) -> List[FaceDescriptor]:
    """
    Minimal faces are the affine sets {Gₛᵀx = gₛ, Hᵀx = h} contained in F, with
    rank[Gₛ H] equal to the constraint rank. Each is represented by its
    least-norm point, which is unique to the face, so it doubles as the dedup key.
    """
    feasible_point(P)
    rho = constraint_rank(P)
    k = rho - numerical_rank(P.H)
    found = []
    for subset in guarded_subsets(P.m, k, "minimal face enumeration"):
        M, rhs = _equality_system(P, subset)
        if numerical_rank(M) < rho:
            continue
        x = min_norm_solution(M, rhs, P.n)
        if x is not None and P.contains(x):
            found.append(x)
    faces = [
        FaceDescriptor(active_ineq=tuple(active_set(P, w)), dim=P.n - rho, witness=w)
        for w in dedup_points(found)
    ]
    logger.info(f"enumerated {len(faces)} minimal faces of dimension {P.n - rho}")
    return faces


def lineality_basis(P: Polyhedron) -> np.ndarray:
    basis = null_basis(np.hstack([P.G, P.H]).T, P.n)
    if basis.shape[1] == 0:
        return np.zeros((P.n, 0))
    return np.column_stack([normalize_direction(basis[:, j]) for j in range(basis.shape[1])])


def extreme_rays(P: Polyhedron) -> ConeGenerators:
    """Lineality basis of F∞ and the extreme rays of its pointed part F∞ ∩ L⊥."""
    L = lineality_basis(P)
    fixed = np.hstack([P.H, L])
    k = P.n - 1 - numerical_rank(fixed)
    tol = settings.FEASIBILITY_TOL
    found = []
    for subset in guarded_subsets(P.m, k, "extreme ray enumeration"):
        M = np.hstack([P.G[:, list(subset)], fixed]).T
        if numerical_rank(M) != P.n - 1:
            continue
        d = null_basis(M, P.n)
        if d.shape[1] != 1:
            continue
        d = d[:, 0]
        for candidate in (d, -d):
            slopes = P.G.T @ candidate
            if np.all(slopes <= tol) and np.any(slopes < -tol):
                found.append(normalize_direction(candidate, orient=False))
    rays = dedup_points(found)
    logger.info(f"found {len(rays)} extreme rays and a lineality space of dimension {L.shape[1]}")
    R = np.column_stack(rays) if rays else np.zeros((P.n, 0))
    return ConeGenerators(lineality_basis=L, extreme_rays=R)


def decompose(P: Polyhedron) -> Tuple[List[np.ndarray], ConeGenerators]:
    """F = conv(witnesses) + cone(extreme rays) + span(lineality basis)."""
    witnesses = [face.witness for face in enumerate_minimal_faces(P)]
    return witnesses, extreme_rays(P)


def express_point(witnesses: Sequence[np.ndarray], cone: ConeGenerators,
                  x) -> Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Coefficients (λ, μ, ν) with x = Σλ·witness + Σμ·ray + Σν·lineality, or None."""
    x = np.asarray(x, dtype=float)
    s, t, l = len(witnesses), cone.extreme_rays.shape[1], cone.lineality_basis.shape[1]
    if s == 0:
        return None
    M = np.column_stack(witnesses)
    lhs = np.vstack([
        np.hstack([M, cone.extreme_rays, cone.lineality_basis]),
        np.concatenate([np.ones(s), np.zeros(t + l)])[None, :],
    ])
    rhs = np.concatenate([x, [1.0]])
    lower = np.concatenate([np.zeros(s + t), np.full(l, -np.inf)])
    outcome = solve_lp(LpProblem.build(np.zeros(s + t + l), lhs, rhs, lower_bounds=lower))
    if outcome.status != LpStatus.OPTIMAL:
        return None
    z = outcome.primal
    return z[:s], z[s:s + t], z[s + t:]
