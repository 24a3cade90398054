# app/models/derivations.py
from dataclasses import dataclass
from typing import List

import numpy as np

from app.core.exceptions import ShapeError
from .base import DomainModel

GRAM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DerivationBasis(DomainModel):
    """
    Frobenius-orthonormal family of n x n matrices, stacked along axis 0.

    The Leibniz rule is not checked here since the basis does not carry its
    algebra; DerivationAlgebra.is_derivation does that.
    """

    n: int
    mats: np.ndarray

    ARRAY_FIELDS = {"mats": 3}

    def validate(self) -> None:
        if self.mats.shape[1:] != (self.n, self.n):
            raise ShapeError(f"derivation matrices must be {self.n}x{self.n}, got {self.mats.shape[1:]}")
        if self.dim:
            defect = float(np.max(np.abs(self.gram() - np.eye(self.dim))))
            if defect >= GRAM_TOL:
                raise ShapeError(f"derivation basis is not Frobenius-orthonormal (defect {defect:.3e})")

    @property
    def dim(self) -> int:
        return self.mats.shape[0]

    def gram(self) -> np.ndarray:
        flat = self.flat()
        return flat @ flat.T

    def flat(self) -> np.ndarray:
        """Row-major vectorization, one row per basis element."""
        return self.mats.reshape(self.dim, self.n * self.n)

    def as_list(self) -> List[np.ndarray]:
        return [m for m in self.mats]

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        """Linear combination sum_j coeffs[j] * mats[j]."""
        if self.dim == 0:
            return np.zeros((self.n, self.n))
        return np.einsum("j,jab->ab", np.asarray(coeffs, dtype=float), self.mats)

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the span, acting on vectorized matrices."""
        flat = self.flat()
        return flat.T @ flat
