"""
Objectives over a fixed region with a prescribed relaxation behaviour.

Each generator draws multipliers (u, w, R, S) with a support pattern chosen
against the designated lifted point and then defines
    Q = RᵀHᵀ + HR + GSGᵀ,   c = −Gu + Hw − Rᵀh − GSg,
so that the pair satisfies the optimality conditions by construction.
"""
import logging
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import BadFaceIndex, BoundedRegion, HasVertices, IdenticalVertices, NotAVertex, WitnessOffFace
from ..duality.dual import check_optimality
from ..duality.multipliers import DualSolution
from ..oracle.global_qp import OracleStatus, global_min_qp
from ..polyhedra.enumeration import enumerate_minimal_faces, extreme_rays
from ..polyhedra.polyhedron import Polyhedron, active_set, constraint_rank, feasible_point, is_bounded, is_vertex
from ..relaxation.builder import solve_rlt
from ..relaxation.instance import LiftedDirection, LiftedPoint, QpInstance, lift, midpoint_lift
from ..relaxation.lifting import in_lifted_recession_cone
from ..schemas.base import ArrayModel, OptionalFloatArray

logger = logging.getLogger(__name__)


class InstanceKind(str, Enum):
    UNBOUNDED = "Unbounded"
    EXACT = "Exact"
    INEXACT_VERTICES = "InexactVertices"
    INEXACT_MINFACES = "InexactMinFaces"


class Certificate(ArrayModel):
    """Kind-dependent evidence; unused fields stay None."""
    ray: Optional[LiftedDirection] = None
    ray_value: Optional[float] = None
    base_point: OptionalFloatArray = None
    witness: OptionalFloatArray = None
    face_index: Optional[int] = None
    indices: Optional[Tuple[int, int]] = None
    points: Optional[Tuple[np.ndarray, np.ndarray]] = None
    dual: Optional[DualSolution] = None
    optimum: Optional[LiftedPoint] = None


class GeneratedInstance(ArrayModel):
    qp: QpInstance
    kind: InstanceKind
    seed: int
    certificate: Certificate


def assemble_objective(P: Polyhedron, ds: DualSolution) -> Tuple[np.ndarray, np.ndarray]:
    R = ds.R_for(P.n)
    Q = R.T @ P.H.T + P.H @ R + P.G @ ds.S @ P.G.T
    c = -P.G @ ds.u + P.H @ ds.w - R.T @ P.h - P.G @ ds.S @ P.g
    return 0.5 * (Q + Q.T), c


def _symmetric_draw(rng: np.random.Generator, m: int, low: float, high: float) -> np.ndarray:
    U = rng.uniform(low, high, size=(m, m))
    return 0.5 * (U + U.T)


def _free_blocks(rng: np.random.Generator, P: Polyhedron, w=None, R=None):
    w_draw = rng.uniform(-1.0, 1.0, size=P.p)
    R_draw = rng.uniform(-1.0, 1.0, size=(P.p, P.n))
    w = w_draw if w is None else np.asarray(w, dtype=float)
    R = R_draw if R is None else np.asarray(R, dtype=float).reshape(P.p, P.n)
    return w, R


def _active_mask(P: Polyhedron, x: np.ndarray) -> np.ndarray:
    r = P.residuals(x)
    return np.abs(r) <= settings.FEASIBILITY_TOL * (1.0 + np.abs(P.g))


def gen_unbounded(P: Polyhedron, seed: int, Q=None) -> GeneratedInstance:
    """Random Q and c = −Qx̂ + αd̂ with α = −1/‖d̂‖², so the lifted ray (d̂, x̂d̂ᵀ + d̂x̂ᵀ) has objective slope −1."""
    if is_bounded(P):
        raise BoundedRegion("an unbounded relaxation needs an unbounded region")
    rng = np.random.default_rng(seed)
    x_hat = feasible_point(P)
    cone = extreme_rays(P)
    d_hat = cone.lineality_basis[:, 0] if cone.lineality_basis.shape[1] else cone.extreme_rays[:, 0]

    A = rng.uniform(-1.0, 1.0, size=(P.n, P.n))
    Q = 0.5 * (A + A.T) if Q is None else np.asarray(Q, dtype=float)
    alpha = -1.0 / float(d_hat @ d_hat)
    c = -Q @ x_hat + alpha * d_hat

    D_hat = np.outer(x_hat, d_hat) + np.outer(d_hat, x_hat)
    ray = LiftedDirection(d=d_hat, D=D_hat)
    value = float(0.5 * np.sum(Q * D_hat) + c @ d_hat)
    logger.info(f"generated unbounded instance (seed {seed}), ray value {value:.12g}")
    return GeneratedInstance(
        qp=QpInstance(Q=Q, c=c, poly=P), kind=InstanceKind.UNBOUNDED, seed=seed,
        certificate=Certificate(ray=ray, ray_value=value, base_point=x_hat),
    )


def gen_exact(P: Polyhedron, face_index: int, seed: int) -> GeneratedInstance:
    """Multipliers complementary to lift(v) for the witness v of the chosen minimal face."""
    feasible_point(P)
    faces = enumerate_minimal_faces(P)
    if not 0 <= face_index < len(faces):
        raise BadFaceIndex(f"face index {face_index} out of range for {len(faces)} minimal faces")
    v = faces[face_index].witness
    rng = np.random.default_rng(seed)
    active = _active_mask(P, v)

    u = np.where(active, rng.uniform(0.5, 1.5, size=P.m), 0.0)
    support = active[:, None] | active[None, :]
    S = np.where(support, _symmetric_draw(rng, P.m, 0.5, 1.5), 0.0)
    w, R = _free_blocks(rng, P)
    ds = DualSolution(u=u, w=w, R=R, S=S)
    Q, c = assemble_objective(P, ds)
    logger.info(f"generated exact instance on face {face_index} (seed {seed})")
    return GeneratedInstance(
        qp=QpInstance(Q=Q, c=c, poly=P), kind=InstanceKind.EXACT, seed=seed,
        certificate=Certificate(witness=v, face_index=face_index, dual=ds, optimum=lift(v)),
    )


def _inexact_multipliers(rng: np.random.Generator, P: Polyhedron, v1: np.ndarray, v2: np.ndarray,
                         u=None, w=None, R=None, S=None) -> DualSolution:
    """
    Blocks by activity: 0 at both points, 1 only at v1, 2 only at v2, 3 at neither.
    u > 0 on block 0; S > 0 on blocks 00, 01, 02, 11, 22, S ≥ 0 on 03, zero elsewhere.
    """
    a1, a2 = _active_mask(P, v1), _active_mask(P, v2)
    block = np.where(a1 & a2, 0, np.where(a1, 1, np.where(a2, 2, 3)))
    positive_pairs = {(0, 0), (0, 1), (1, 0), (0, 2), (2, 0), (1, 1), (2, 2)}
    nonnegative_pairs = {(0, 3), (3, 0)}

    u_draw = np.where(block == 0, rng.uniform(0.5, 1.5, size=P.m), 0.0)
    positive = np.array([[(bi, bj) in positive_pairs for bj in block] for bi in block], dtype=bool).reshape(P.m, P.m)
    nonneg = np.array([[(bi, bj) in nonnegative_pairs for bj in block] for bi in block], dtype=bool).reshape(P.m, P.m)
    S_draw = np.where(positive, _symmetric_draw(rng, P.m, 0.5, 1.5), 0.0) + \
        np.where(nonneg, _symmetric_draw(rng, P.m, 0.0, 1.0), 0.0)
    w_draw, R_draw = _free_blocks(rng, P, w, R)
    return DualSolution(
        u=u_draw if u is None else np.asarray(u, dtype=float),
        w=w_draw,
        R=R_draw,
        S=S_draw if S is None else np.asarray(S, dtype=float),
    )


def gen_inexact_vertices(P: Polyhedron, v1, v2, seed: int, **overrides) -> GeneratedInstance:
    """Instance whose relaxation is solved uniquely by the midpoint lift of two vertices."""
    v1, v2 = np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)
    for v in (v1, v2):
        if not is_vertex(P, v):
            raise NotAVertex(f"{v.tolist()} is not a vertex of the region")
    if np.max(np.abs(v1 - v2)) <= settings.DEDUP_TOL:
        raise IdenticalVertices("the two vertices coincide")
    rng = np.random.default_rng(seed)
    ds = _inexact_multipliers(rng, P, v1, v2, **overrides)
    Q, c = assemble_objective(P, ds)
    logger.info(f"generated inexact instance on two vertices (seed {seed})")
    return GeneratedInstance(
        qp=QpInstance(Q=Q, c=c, poly=P), kind=InstanceKind.INEXACT_VERTICES, seed=seed,
        certificate=Certificate(points=(v1, v2), dual=ds, optimum=midpoint_lift(v1, v2)),
    )


def gen_inexact_minfaces(P: Polyhedron, f1: int, f2: int, seed: int,
                         witnesses: Optional[Sequence] = None, **overrides) -> GeneratedInstance:
    """Same construction on the witnesses of two distinct minimal faces of a region without vertices."""
    if constraint_rank(P) == P.n:
        raise HasVertices("the region has vertices; use gen_inexact_vertices")
    faces = enumerate_minimal_faces(P)
    if f1 == f2 or not (0 <= f1 < len(faces) and 0 <= f2 < len(faces)):
        raise BadFaceIndex(f"need two distinct face indices below {len(faces)}, got {f1} and {f2}")
    if witnesses is None:
        v1, v2 = faces[f1].witness, faces[f2].witness
    else:
        v1, v2 = (np.asarray(v, dtype=float) for v in witnesses)
        for v, f in ((v1, f1), (v2, f2)):
            if not P.contains(v) or not set(faces[f].active_ineq) <= set(active_set(P, v)):
                raise WitnessOffFace(f"{v.tolist()} does not lie on minimal face {f}")
    rng = np.random.default_rng(seed)
    ds = _inexact_multipliers(rng, P, v1, v2, **overrides)
    Q, c = assemble_objective(P, ds)
    logger.info(f"generated inexact instance on minimal faces {f1} and {f2} (seed {seed})")
    return GeneratedInstance(
        qp=QpInstance(Q=Q, c=c, poly=P), kind=InstanceKind.INEXACT_MINFACES, seed=seed,
        certificate=Certificate(indices=(f1, f2), points=(v1, v2), dual=ds, optimum=midpoint_lift(v1, v2)),
    )


def verify_generated(inst: GeneratedInstance) -> bool:
    """
    Re-check the embedded certificate with the independent checkers. Inexact
    kinds must also show a certified gap of at least INEXACT_GAP_MARGIN between
    the global optimum and the relaxation bound.
    """
    cert, qp = inst.certificate, inst.qp
    if inst.kind == InstanceKind.UNBOUNDED:
        ray = cert.ray
        value = 0.5 * np.sum(qp.Q * ray.D) + qp.c @ ray.d
        return bool(in_lifted_recession_cone(qp.poly, ray) and value < 0)
    if not check_optimality(qp, cert.optimum, cert.dual):
        return False
    if inst.kind == InstanceKind.EXACT:
        return True
    oracle = global_min_qp(qp)
    if oracle.status != OracleStatus.OPTIMAL:
        logger.warning(f"gap of the {inst.kind.value} instance (seed {inst.seed}) not certified: oracle {oracle.status.value}")
        return False
    bound = solve_rlt(qp).value
    gap = oracle.value - bound
    if gap < settings.INEXACT_GAP_MARGIN:
        logger.warning(f"{inst.kind.value} instance (seed {inst.seed}) has gap {gap:.3e}")
        return False
    return True
