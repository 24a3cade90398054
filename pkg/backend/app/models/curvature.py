# app/models/curvature.py
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.core.exceptions import ShapeError
from .base import DomainModel

Signature = Tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class ConnectionTable(DomainModel):
    """gamma[i, j, k] = <nabla_{x_i} x_j, x_k> in an orthonormal frame."""

    gamma: np.ndarray

    ARRAY_FIELDS = {"gamma": 3}

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def metric_compatibility_defect(self) -> float:
        return float(np.max(np.abs(self.gamma + self.gamma.transpose(0, 2, 1))))

    def torsion_defect(self, c: np.ndarray) -> float:
        return float(np.max(np.abs(self.gamma - self.gamma.transpose(1, 0, 2) - c)))


@dataclass(frozen=True, eq=False)
class RicciReport(DomainModel):
    ric: np.ndarray
    eigenvalues: np.ndarray
    signature: Signature
    scalar_curvature: float

    ARRAY_FIELDS = {"ric": 2, "eigenvalues": 1}

    def validate(self) -> None:
        n = self.ric.shape[0]
        if self.ric.shape != (n, n) or self.eigenvalues.shape != (n,):
            raise ShapeError("Ricci operator and eigenvalues disagree in dimension")
        if sum(self.signature) != n or min(self.signature) < 0:
            raise ShapeError(f"signature {self.signature} does not partition {n} eigenvalues")

    @property
    def dim(self) -> int:
        return self.ric.shape[0]
