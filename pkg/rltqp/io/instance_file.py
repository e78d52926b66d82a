"""
JSON instance documents.

Rows of "A" and "B" are constraint normals (A = Gᵀ, B = Hᵀ). Reals are written
with Python's shortest round-trip repr, so parse → emit → parse preserves the
numeric payload exactly.
"""
import json
import logging
import re
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ValidationError

from ..core.errors import DimensionMismatch, ParseError
from ..polyhedra.polyhedron import Polyhedron
from ..relaxation.instance import QpInstance
from ..schemas.instance import InstanceDocument, InstanceMeta

logger = logging.getLogger(__name__)


def _line_of_key(doc: str, key: str) -> Optional[int]:
    match = re.search(rf'"{re.escape(key)}"\s*:', doc)
    if match is None:
        return None
    return doc.count("\n", 0, match.start()) + 1


def load_document(doc: str) -> InstanceDocument:
    try:
        raw = json.loads(doc)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg}", line=e.lineno)
    try:
        return InstanceDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        top = str(first["loc"][0]) if first["loc"] else None
        raise ParseError(first["msg"], line=_line_of_key(doc, top) if top else None, field=field)


def _check_dimensions(d: InstanceDocument):
    n = d.n
    if n < 1:
        raise DimensionMismatch(f"n must be positive, got {n}")
    if len(d.Q) != n or any(len(row) != n for row in d.Q):
        raise DimensionMismatch(f"Q must be {n}x{n}")
    if len(d.c) != n:
        raise DimensionMismatch(f"c has length {len(d.c)}, expected {n}")
    for rows, rhs, count, name in ((d.A, d.g, d.m, "A"), (d.B, d.h, d.p, "B")):
        if len(rows) != count or any(len(row) != n for row in rows):
            raise DimensionMismatch(f"{name} must have {count} rows of length {n}")
        if len(rhs) != count:
            raise DimensionMismatch(f"right-hand side of {name} has length {len(rhs)}, expected {count}")


def document_to_instance(d: InstanceDocument) -> QpInstance:
    _check_dimensions(d)
    n = d.n
    poly = Polyhedron(
        n=n,
        G=np.array(d.A, dtype=float).reshape(d.m, n).T, g=d.g,
        H=np.array(d.B, dtype=float).reshape(d.p, n).T, h=d.h,
    )
    return QpInstance(Q=d.Q, c=d.c, poly=poly)


def read_instance(doc: str) -> Tuple[QpInstance, Optional[InstanceMeta]]:
    d = load_document(doc)
    qp = document_to_instance(d)
    logger.info(f"parsed instance with n={d.n}, m={d.m}, p={d.p}")
    return qp, d.meta


def parse_instance(doc: str) -> QpInstance:
    """Parse and validate an instance document. Raises ParseError or DimensionMismatch."""
    return read_instance(doc)[0]


def to_plain(value: Any) -> Any:
    """Convert models, arrays and enums to JSON-compatible values; None fields are dropped."""
    if isinstance(value, BaseModel):
        return {k: to_plain(v) for k, v in value if v is not None}
    if isinstance(value, dict):
        return {k: to_plain(v) for k, v in value.items() if v is not None}
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (tuple, list)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def emit_instance(qp: QpInstance, meta: Optional[Dict[str, Any]] = None) -> str:
    P = qp.poly
    A, g, B, h = P.to_rows()
    fields = {
        "n": P.n, "m": P.m, "p": P.p,
        "Q": qp.Q.tolist(), "c": qp.c.tolist(),
        "A": A.tolist(), "g": g.tolist(),
        "B": B.tolist(), "h": h.tolist(),
    }
    if meta:
        fields["meta"] = to_plain(meta)
    body = ",\n".join(f"  {json.dumps(key)}: {json.dumps(value)}" for key, value in fields.items())
    return "{\n" + body + "\n}\n"
