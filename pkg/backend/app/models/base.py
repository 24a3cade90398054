# app/models/base.py
from dataclasses import dataclass, fields
from typing import Any, ClassVar, Dict, Optional

import numpy as np

from app.core.exceptions import ShapeError


def readonly_array(value: Any, ndim: Optional[int] = None, name: str = "array") -> np.ndarray:
    """Copy `value` into a read-only float64 array, checking its rank."""
    arr = np.array(value, dtype=float, copy=True)
    if ndim is not None and arr.ndim != ndim:
        raise ShapeError(f"{name} must have {ndim} dimensions, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DomainModel:
    """
    Immutable value type. Subclasses list their array-valued fields in
    ARRAY_FIELDS (name -> rank); they are copied and frozen on construction.
    """

    ARRAY_FIELDS: ClassVar[Dict[str, int]] = {}

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name in self.ARRAY_FIELDS:
                frozen = readonly_array(getattr(self, f.name), self.ARRAY_FIELDS[f.name], f.name)
                object.__setattr__(self, f.name, frozen)
        self.validate()

    def validate(self) -> None:
        """Hook for invariant checks; raises a MilnorError subclass."""
