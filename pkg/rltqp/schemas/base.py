from typing import Annotated, Optional

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict


def _to_array(value) -> np.ndarray:
    arr = np.array(value, dtype=float)
    arr.setflags(write=False)
    return arr


def _to_optional_array(value) -> Optional[np.ndarray]:
    if value is None:
        return None
    return _to_array(value)


# Read-only float arrays; lists and tuples are accepted on input
FloatArray = Annotated[np.ndarray, BeforeValidator(_to_array)]
OptionalFloatArray = Annotated[Optional[np.ndarray], BeforeValidator(_to_optional_array)]


class ArrayModel(BaseModel):
    """Frozen record holding numpy arrays."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
