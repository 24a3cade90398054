# app/models/lie_algebra.py
"""
Lie algebras given by structure constants, and basis changes.

Index convention: documentation and files are 1-based, arrays are 0-based.
c[i, j, k] is the coefficient of e_k in [e_i, e_j]. A basis change stores the
new basis vectors as the columns of P, written in old coordinates.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from app.core.exceptions import (
    DimensionError,
    ShapeError,
    SingularMatrixError,
    StructureConstantsError,
)
from .base import DomainModel

# Defect tolerances: absolute part for exactly entered constants, relative
# part for constants produced by floating-point basis changes.
ABS_TOL = 1e-12
REL_TOL = 1e-9


class FamilyTag(enum.Enum):
    RH2_SUM_ABELIAN = "rh2+abelian"
    RH_LINE_SUM = "rh-line"
    CUSTOM = "custom"

    @property
    def is_family(self) -> bool:
        return self is not FamilyTag.CUSTOM


def antisymmetry_defect_of(c: np.ndarray) -> float:
    if c.size == 0:
        return 0.0
    return float(np.max(np.abs(c + c.transpose(1, 0, 2))))


def jacobi_tensor(c: np.ndarray) -> np.ndarray:
    """J[i, j, l, :] = [e_i,[e_j,e_l]] + [e_j,[e_l,e_i]] + [e_l,[e_i,e_j]]."""
    return (
        np.einsum("jlm,imk->ijlk", c, c)
        + np.einsum("lim,jmk->ijlk", c, c)
        + np.einsum("ijm,lmk->ijlk", c, c)
    )


def jacobi_defect_of(c: np.ndarray) -> float:
    if c.size == 0:
        return 0.0
    return float(np.max(np.abs(jacobi_tensor(c))))


@dataclass(frozen=True, eq=False)
class LieAlgebra(DomainModel):
    dim: int
    c: np.ndarray
    family_tag: FamilyTag = FamilyTag.CUSTOM

    ARRAY_FIELDS = {"c": 3}

    def validate(self) -> None:
        n = self.dim
        if n < 2:
            raise DimensionError(f"Lie algebra dimension must be at least 2, got {n}")
        if self.family_tag.is_family and n < 3:
            raise DimensionError(f"{self.family_tag.value} requires dimension >= 3, got {n}")
        if self.c.shape != (n, n, n):
            raise ShapeError(f"structure constants must have shape {(n, n, n)}, got {self.c.shape}")

        scale = float(np.max(np.abs(self.c))) if self.c.size else 0.0
        antisym = antisymmetry_defect_of(self.c)
        if antisym > ABS_TOL + REL_TOL * scale:
            raise StructureConstantsError(f"structure constants are not antisymmetric (defect {antisym:.3e})")
        jacobi = jacobi_defect_of(self.c)
        if jacobi > ABS_TOL + REL_TOL * scale ** 2:
            raise StructureConstantsError(f"Jacobi identity fails (defect {jacobi:.3e})")

    @property
    def is_abelian(self) -> bool:
        return not np.any(self.c)


@dataclass(frozen=True, eq=False)
class BasisChange(DomainModel):
    """Invertible matrix whose columns are the new basis vectors."""

    matrix: np.ndarray

    ARRAY_FIELDS = {"matrix": 2}

    def validate(self) -> None:
        P = self.matrix
        if P.shape[0] != P.shape[1]:
            raise ShapeError(f"basis change must be square, got shape {P.shape}")
        if not is_invertible(P):
            raise SingularMatrixError("basis change matrix is singular")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "BasisChange":
        return BasisChange(np.linalg.inv(self.matrix))


def is_invertible(P: np.ndarray, rel_tol: Optional[float] = None) -> bool:
    """
    sigma_min(P) > rel_tol * sigma_max(P), independent of scale and dimension.

    The default rel_tol is n * eps, the numerical-rank cut-off of
    numpy.linalg.matrix_rank.
    """
    if P.size == 0 or not np.all(np.isfinite(P)):
        return False
    if rel_tol is None:
        rel_tol = max(P.shape) * np.finfo(float).eps
    sigma = scipy.linalg.svdvals(P)
    return bool(sigma[0] > 0.0 and sigma[-1] > rel_tol * sigma[0])
