"""Plain-text reports: one key=value pair per line in a fixed field order."""
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from ..duality.exactness import ExactnessReport
from ..polyhedra.polyhedron import ConeGenerators, FaceDescriptor
from ..relaxation.builder import RltSolution
from ..relaxation.instance import LiftedPoint
from ..special.qpa import BoundSandwich

Field = Tuple[str, Any]

# Values this close to zero print as 0 so reports do not depend on round-off
ZERO_SNAP = 1e-12


def format_float(value: float) -> str:
    value = float(value)
    if np.isfinite(value) and abs(value) < ZERO_SNAP:
        value = 0.0
    return "%.12g" % (value + 0.0)


def format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, np.ndarray) and value.ndim == 2:
        return ";".join(format_value(row) for row in value)
    if isinstance(value, (np.ndarray, list, tuple)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def render(fields: Sequence[Field]) -> str:
    return "".join(f"{key}={format_value(value)}\n" for key, value in fields)


def solve_fields(sol: RltSolution) -> List[Field]:
    fields: List[Field] = [("status", sol.status), ("rlt", sol.value)]
    if sol.point is not None:
        fields += [("x", sol.point.x), ("X", sol.point.X)]
    if sol.dual is not None:
        fields += [("u", sol.dual.u), ("w", sol.dual.w), ("R", sol.dual.R), ("S", sol.dual.S)]
    if sol.ray is not None:
        fields += [("ray_d", sol.ray.d), ("ray_D", sol.ray.D)]
    return fields


def certify_fields(report: ExactnessReport) -> List[Field]:
    fields: List[Field] = [("status", report.status), ("rlt", report.rlt_bound), ("qp", report.qp_value)]
    if report.witness is not None:
        fields += [("witness", report.witness)]
    if report.witness_face is not None:
        fields += [("witness_face", report.witness_face.active_ineq)]
    return fields


def vertex_fields(vertices: Sequence[np.ndarray], faces: Sequence[FaceDescriptor], cone: ConeGenerators,
                  lifted: Optional[Sequence[LiftedPoint]] = None) -> List[Field]:
    fields: List[Field] = [("vertices", len(vertices))]
    fields += [(f"vertex.{k}", v) for k, v in enumerate(vertices)]
    fields += [("minimal_faces", len(faces))]
    for k, face in enumerate(faces):
        fields += [(f"face.{k}.active", face.active_ineq), (f"face.{k}.dim", face.dim),
                   (f"face.{k}.witness", face.witness)]
    fields += [("lineality", cone.lineality_basis.shape[1]), ("rays", cone.extreme_rays.shape[1])]
    fields += [(f"ray.{k}", r) for k, r in enumerate(cone.extreme_rays.T)]
    fields += [(f"lineality.{k}", b) for k, b in enumerate(cone.lineality_basis.T)]
    if lifted is not None:
        fields += [("lifted_vertices", len(lifted))]
        for k, pt in enumerate(lifted):
            fields += [(f"lifted.{k}.x", pt.x), (f"lifted.{k}.X", pt.X)]
    return fields


def sandwich_fields(sandwich: BoundSandwich) -> List[Field]:
    return [("rlt", sandwich.rlt), ("rlt_qpa", sandwich.rlt_qpa), ("qp", sandwich.qp), ("ordered", sandwich.ordered)]
