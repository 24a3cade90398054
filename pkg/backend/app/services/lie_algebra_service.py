"""
Lie Algebra Service

This module provides the structure-constant layer: building the two
solvable families g_RH2 + R^(n-2) and g_RH(n-1) + R together with their
Milnor-frame relatives, evaluating brackets, checking the Jacobi identity and
rewriting structure constants in a new basis.

Indices are 1-based in docstrings and files, 0-based in arrays.
"""

from typing import Mapping, Tuple, Union

import numpy as np

from app.core.exceptions import DimensionError, ShapeError, UnsupportedFamilyError
from app.core.logging import get_logger
from app.models.lie_algebra import (
    BasisChange,
    FamilyTag,
    LieAlgebra,
    antisymmetry_defect_of,
    jacobi_defect_of,
)

logger = get_logger(__name__)

BracketTable = Mapping[Tuple[int, int], Mapping[int, float]]


class LieAlgebraService:
    """Construction and manipulation of Lie algebras by structure constants."""

    @staticmethod
    def build_family(family_tag: FamilyTag, n: int) -> LieAlgebra:
        """
        Build one of the two families in its canonical basis.

        Args:
            family_tag: RH2_SUM_ABELIAN ([e_1, e_2] = e_2) or
                RH_LINE_SUM ([e_1, e_i] = e_i for i = 3..n)
            n: Dimension, at least 3

        Returns:
            LieAlgebra tagged with the family

        Raises:
            DimensionError: If n < 3
            UnsupportedFamilyError: If family_tag is CUSTOM
        """
        require_family(family_tag)
        if n < 3:
            raise DimensionError(f"{family_tag.value} requires dimension >= 3, got {n}")
        c = np.zeros((n, n, n))
        if family_tag is FamilyTag.RH2_SUM_ABELIAN:
            _set_bracket(c, 0, 1, 1, 1.0)
        else:
            for i in range(2, n):
                _set_bracket(c, 0, i, i, 1.0)
        return LieAlgebra(dim=n, c=c, family_tag=family_tag)

    @staticmethod
    def milnor_algebra(family_tag: FamilyTag, n: int, lam: float) -> LieAlgebra:
        """
        Structure constants of a Milnor frame with parameter lam.

        RH2_SUM_ABELIAN: [x_1, x_2] = x_2 + lam x_n.
        RH_LINE_SUM: [x_1, x_2] = -lam x_n and [x_1, x_i] = x_i for i >= 3.
        The result is tagged CUSTOM since its basis is not the canonical one.
        """
        require_family(family_tag)
        if n < 3:
            raise DimensionError(f"{family_tag.value} requires dimension >= 3, got {n}")
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        c = np.zeros((n, n, n))
        if family_tag is FamilyTag.RH2_SUM_ABELIAN:
            _set_bracket(c, 0, 1, 1, 1.0)
            _set_bracket(c, 0, 1, n - 1, lam)
        else:
            _set_bracket(c, 0, 1, n - 1, -lam)
            for i in range(2, n):
                _set_bracket(c, 0, i, i, 1.0)
        return LieAlgebra(dim=n, c=c)

    @staticmethod
    def representative(n: int, lam: float) -> np.ndarray:
        """g_lam = I_n - lam E_{n,2}."""
        g = np.eye(n)
        g[n - 1, 1] = -lam
        return g

    @staticmethod
    def from_brackets(
        n: int,
        brackets: BracketTable,
        family_tag: FamilyTag = FamilyTag.CUSTOM,
    ) -> LieAlgebra:
        """
        Build an algebra from 0-based bracket entries {(i, j): {k: v}} with
        i < j; the antisymmetric partners are filled in.
        """
        c = np.zeros((n, n, n))
        for (i, j), row in brackets.items():
            if not (0 <= i < j < n):
                raise ShapeError(f"bracket pair ({i + 1}, {j + 1}) must satisfy 1 <= i < j <= {n}")
            for k, v in row.items():
                if not 0 <= k < n:
                    raise ShapeError(f"bracket index {k + 1} out of range 1..{n}")
                _set_bracket(c, i, j, k, float(v))
        return LieAlgebra(dim=n, c=c, family_tag=family_tag)

    @staticmethod
    def bracket(g: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        Evaluate [x, y] for coordinate vectors in the algebra's basis.

        Raises:
            ShapeError: If either vector does not have length g.dim
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (g.dim,) or y.shape != (g.dim,):
            raise ShapeError(f"bracket expects vectors of length {g.dim}, got {x.shape} and {y.shape}")
        return np.einsum("i,j,ijk->k", x, y, g.c)

    @staticmethod
    def jacobi_defect(g: LieAlgebra) -> float:
        """Largest sup-norm of the Jacobiator over basis triples."""
        return jacobi_defect_of(g.c)

    @staticmethod
    def antisymmetry_defect(g: LieAlgebra) -> float:
        return antisymmetry_defect_of(g.c)

    @staticmethod
    def change_basis(g: LieAlgebra, P: Union[BasisChange, np.ndarray]) -> LieAlgebra:
        """
        Rewrite the structure constants in the basis given by the columns of P.

        The new constants c' satisfy [P e_i, P e_j] = sum_k c'[i, j, k] P e_k,
        i.e. c'[i, j, :] = P^-1 [P e_i, P e_j].

        Args:
            g: Algebra in its current basis
            P: BasisChange or raw invertible matrix

        Returns:
            LieAlgebra tagged CUSTOM

        Raises:
            SingularMatrixError: If P is not invertible
            DimensionError: If P does not match g.dim
        """
        if not isinstance(P, BasisChange):
            P = BasisChange(P)
        if P.dim != g.dim:
            raise DimensionError(f"basis change of size {P.dim} for algebra of dimension {g.dim}")
        c_new = rewrite_constants(g.c, P.matrix)
        logger.debug("change_basis: rewrote %d-dimensional algebra", g.dim)
        return LieAlgebra(dim=g.dim, c=c_new)


def rewrite_constants(c: np.ndarray, M: np.ndarray) -> np.ndarray:
    """c'[i, j, :] = M^-1 [M e_i, M e_j], without validating the result."""
    n = M.shape[0]
    pushed = np.einsum("ai,bj,abm->ijm", M, M, c)
    return np.linalg.solve(M, pushed.reshape(-1, n).T).T.reshape(n, n, n)


def _set_bracket(c: np.ndarray, i: int, j: int, k: int, v: float) -> None:
    c[i, j, k] = v
    c[j, i, k] = -v


def require_family(family_tag: FamilyTag) -> None:
    if not family_tag.is_family:
        raise UnsupportedFamilyError("operation is only defined for the rh2+abelian and rh-line families")

