from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict


class InstanceMeta(BaseModel):
    model_config = ConfigDict(extra="allow")

    seed: Optional[int] = None
    kind: Optional[str] = None
    certificate: Optional[Dict[str, Any]] = None


class InstanceDocument(BaseModel):
    """On-disk instance: rows of A are the inequality normals (A = Gᵀ), rows of B the equality normals."""
    model_config = ConfigDict(extra="forbid")

    n: int
    m: int = 0
    p: int = 0
    Q: List[List[float]]
    c: List[float]
    A: List[List[float]] = []
    g: List[float] = []
    B: List[List[float]] = []
    h: List[float] = []
    meta: Optional[InstanceMeta] = None
