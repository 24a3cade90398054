"""
Derivation Algebra Service

This module computes Der(g) = {D : D[x, y] = [Dx, y] + [x, Dy]} as the null
space of the Leibniz system, checks individual matrices against the Leibniz
rule, and verifies the block pattern shared by the two solvable families.
It also rewrites a derivation basis in another basis of the algebra, which is
how the solvsoliton test obtains Der(g) in a Milnor frame.

A linear map is stored through its matrix expression A with
(phi(x_1), ..., phi(x_n)) = (x_1, ..., x_n) A, i.e. column j holds the
coordinates of phi(x_j).
"""

from typing import Tuple

import numpy as np
import scipy.linalg

from app.core.exceptions import ShapeError
from app.core.logging import get_logger
from app.core.settings import settings
from app.models.derivations import DerivationBasis
from app.models.lie_algebra import LieAlgebra
from app.services.lie_algebra_service import LieAlgebraService, require_family

logger = get_logger(__name__)

LEIBNIZ_TOL = 1e-9


class DerivationAlgebra:
    """Computes and inspects derivation algebras."""

    @staticmethod
    def leibniz_system(g: LieAlgebra) -> np.ndarray:
        """
        Matrix of the linear map D -> (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j])_{i<j}.

        Columns are indexed by the row-major vectorization of D, rows by
        (i, j, k) with i < j.
        """
        n = g.dim
        c = g.c
        eye = np.eye(n)
        T = (
            np.einsum("ak,ijb->ijkab", eye, c)
            - np.einsum("bi,ajk->ijkab", eye, c)
            - np.einsum("bj,iak->ijkab", eye, c)
        )
        iu, ju = np.triu_indices(n, 1)
        return T[iu, ju].reshape(-1, n * n)

    @staticmethod
    def derivation_basis(g: LieAlgebra) -> DerivationBasis:
        """
        Compute a Frobenius-orthonormal basis of Der(g).

        The null space is taken from the singular value decomposition of the
        Leibniz system, keeping singular values below
        settings.DERIVATION_RCOND times the largest one. An abelian algebra
        yields the whole matrix space.

        Args:
            g: Lie algebra

        Returns:
            DerivationBasis spanning Der(g)
        """
        n = g.dim
        A = DerivationAlgebra.leibniz_system(g)
        if A.size == 0 or not np.any(A):
            kernel = np.eye(n * n)
        else:
            kernel = scipy.linalg.null_space(A, rcond=settings.DERIVATION_RCOND)
        mats = kernel.T.reshape(-1, n, n)
        logger.debug("derivation_basis: n=%d, dim Der=%d", n, mats.shape[0])
        return DerivationBasis(n=n, mats=mats)

    @staticmethod
    def leibniz_defect(g: LieAlgebra, D: np.ndarray) -> float:
        D = np.asarray(D, dtype=float)
        if D.shape != (g.dim, g.dim):
            raise ShapeError(f"derivation must be {g.dim}x{g.dim}, got {D.shape}")
        c = g.c
        residual = (
            np.einsum("km,ijm->ijk", D, c)
            - np.einsum("mi,mjk->ijk", D, c)
            - np.einsum("mj,imk->ijk", D, c)
        )
        iu, ju = np.triu_indices(g.dim, 1)
        if iu.size == 0:
            return 0.0
        return float(np.max(np.abs(residual[iu, ju])))

    @staticmethod
    def is_derivation(g: LieAlgebra, D: np.ndarray, tol: float = LEIBNIZ_TOL) -> Tuple[bool, float]:
        """
        Check the Leibniz rule for a single matrix.

        Args:
            g: Lie algebra
            D: Matrix expression in the algebra's basis
            tol: Largest acceptable sup-norm defect

        Returns:
            (is_derivation, defect) where defect is the largest
            ||D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]||_inf over i < j

        Raises:
            ShapeError: If D is not g.dim x g.dim
        """
        defect = DerivationAlgebra.leibniz_defect(g, D)
        return defect <= tol, defect

    @staticmethod
    def pattern_mask(n: int) -> np.ndarray:
        """
        Positions allowed to be nonzero for both families:

            0    0  | 0 ... 0
            *    *  | 0 ... 0
            ---------------
            *    0  |
            :    :  |   *
            *    0  |
        """
        allowed = np.zeros((n, n), dtype=bool)
        allowed[1, :2] = True
        allowed[2:, 0] = True
        allowed[2:, 2:] = True
        return allowed

    @staticmethod
    def pattern_check(g: LieAlgebra, B: DerivationBasis, tol: float = LEIBNIZ_TOL) -> bool:
        """
        Check that B spans exactly the matrices with the family zero pattern.

        Every element must vanish on the forbidden positions, and the allowed
        positions must all be reached by the span.

        Raises:
            UnsupportedFamilyError: If g is not one of the two families
        """
        require_family(g.family_tag)
        if B.n != g.dim:
            raise ShapeError(f"basis of {B.n}x{B.n} matrices for algebra of dimension {g.dim}")
        allowed = DerivationAlgebra.pattern_mask(g.dim).ravel()
        flat = B.flat()
        if flat.size and np.max(np.abs(flat[:, ~allowed]), initial=0.0) > tol:
            return False
        reached = np.linalg.matrix_rank(flat[:, allowed], tol=1e-8) if flat.size else 0
        return int(reached) == int(allowed.sum())

    @staticmethod
    def conjugate_basis(B: DerivationBasis, P: np.ndarray) -> DerivationBasis:
        """
        Express every element in the basis given by the columns of P
        (D -> P^-1 D P) and re-orthonormalize.
        """
        P = np.asarray(P, dtype=float)
        if P.shape != (B.n, B.n):
            raise ShapeError(f"basis change must be {B.n}x{B.n}, got {P.shape}")
        if B.dim == 0:
            return B
        conj = np.einsum("ab,jbc,cd->jad", np.linalg.inv(P), B.mats, P)
        span = scipy.linalg.orth(conj.reshape(B.dim, -1).T, rcond=1e-12)
        return DerivationBasis(n=B.n, mats=span.T.reshape(-1, B.n, B.n))

    @staticmethod
    def conjugate_derivation(D: np.ndarray, lam: float) -> np.ndarray:
        """g_lam^-1 D g_lam for a single matrix."""
        D = np.asarray(D, dtype=float)
        n = D.shape[0]
        g = LieAlgebraService.representative(n, lam)
        g_inv = LieAlgebraService.representative(n, -lam)
        return g_inv @ D @ g

    @staticmethod
    def conjugated_derivation_basis(B: DerivationBasis, lam: float) -> DerivationBasis:
        """
        Der(g) written in the Milnor frame with parameter lam.

        Each element becomes g_lam^-1 D g_lam. In that basis the (n, 2) entry
        is tied to the diagonal through lam * (D_22 - D_nn) and the entries
        (i, 2), 3 <= i <= n - 1, equal -lam * D_in.
        """
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        return DerivationAlgebra.conjugate_basis(B, LieAlgebraService.representative(B.n, lam))
