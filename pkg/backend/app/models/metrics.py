# app/models/metrics.py
"""
Inner products and the frames produced by reducing them.

An inner product is stored as its Gram matrix G[i, j] = <e_i, e_j>; the
canonical inner product is G = I. A group element g acts on it through
g.<u, v> = <g^-1 u, g^-1 v>, so g.<,>_0 has Gram matrix (g g^T)^-1.
"""

from dataclasses import dataclass
from typing import Dict, Union

import numpy as np
import scipy.linalg

from app.core.exceptions import DefinitenessError, ShapeError
from .base import DomainModel
from .lie_algebra import FamilyTag

SYMMETRY_TOL = 1e-10
SINGULAR_TOL = 16 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class GramMatrix(DomainModel):
    G: np.ndarray

    ARRAY_FIELDS = {"G": 2}

    def validate(self) -> None:
        G = self.G
        if G.shape[0] != G.shape[1] or G.shape[0] == 0:
            raise ShapeError(f"Gram matrix must be square, got shape {G.shape}")
        if not np.all(np.isfinite(G)):
            raise DefinitenessError("Gram matrix has non-finite entries")
        norm = self.norm
        if float(np.max(np.abs(G - G.T))) >= SYMMETRY_TOL * max(norm, 1e-300):
            raise DefinitenessError("Gram matrix is not symmetric")
        try:
            scipy.linalg.cholesky(G, lower=True)
        except np.linalg.LinAlgError as exc:
            raise DefinitenessError("Gram matrix is not positive-definite") from exc
        if float(scipy.linalg.eigvalsh(G)[0]) <= SINGULAR_TOL * norm:
            raise DefinitenessError("Gram matrix is numerically singular")

    @property
    def dim(self) -> int:
        return self.G.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.G, 2))

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.G))

    def scaled(self, factor: float) -> "GramMatrix":
        return GramMatrix(factor * self.G)

    @classmethod
    def identity(cls, n: int) -> "GramMatrix":
        return cls(np.eye(n))


@dataclass(frozen=True, eq=False)
class MilnorFrame(DomainModel):
    """
    Result of reducing an inner product on one of the two families.

    Column i of `frame` is x_i = phi g_lambda e_i; the columns are orthonormal
    for scale_k * <,> and satisfy the Milnor bracket relations with `lam`.
    """

    family_tag: FamilyTag
    lam: float
    scale_k: float
    frame: np.ndarray
    automorphism: np.ndarray
    orthonormality_defect: float
    bracket_defect: float
    condition_number: float
    conditioning_warning: bool = False
    raw_lambda: float = 0.0

    ARRAY_FIELDS = {"frame": 2, "automorphism": 2}

    def validate(self) -> None:
        if self.lam < 0:
            raise ShapeError(f"lambda must be non-negative, got {self.lam}")
        if not self.scale_k > 0:
            raise ShapeError(f"scale k must be positive, got {self.scale_k}")

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    @property
    def residuals(self) -> Dict[str, Union[float, bool]]:
        return {
            "orthonormality_defect": self.orthonormality_defect,
            "bracket_defect": self.bracket_defect,
            "condition_number": self.condition_number,
            "conditioning_warning": self.conditioning_warning,
        }


@dataclass(frozen=True, eq=False)
class DoubleCosetReduction(DomainModel):
    """g_lambda = phi g K with phi in R^x Aut(g) and K orthogonal."""

    lam: float
    raw_lambda: float
    phi: np.ndarray
    orthogonal: np.ndarray

    ARRAY_FIELDS = {"phi": 2, "orthogonal": 2}


@dataclass(frozen=True, eq=False)
class OrbitCertificate(DomainModel):
    """G2 = (scalar * automorphism).G1 for two metrics in one R^x Aut(g)-orbit."""

    lam: float
    scalar: float
    automorphism: np.ndarray
    defect: float

    ARRAY_FIELDS = {"automorphism": 2}
