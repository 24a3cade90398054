"""
Curvature Service

Levi-Civita connection, Riemann tensor and Ricci operator of a left-invariant
metric, computed from the structure constants of an orthonormal frame; plus
the closed-form Ricci operators of the two families in a Milnor frame and the
eigenvalue signature test.

Conventions, for an orthonormal frame x_1..x_n:
    gamma[i, j, k] = <nabla_{x_i} x_j, x_k>
    R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    R[i, j, k, l] = <R(x_i, x_j) x_k, x_l>
    Ric(X) = sum_i R(X, x_i) x_i
"""

from typing import Dict, Optional, Set

import numpy as np
import scipy.linalg

from app.core.exceptions import DimensionError, NumericalError, ShapeError
from app.core.logging import get_logger
from app.core.settings import settings
from app.models.curvature import ConnectionTable, RicciReport, Signature
from app.models.lie_algebra import FamilyTag, LieAlgebra
from app.services.frame_reduction_service import FrameReduction, MetricLike, as_gram
from app.services.lie_algebra_service import LieAlgebraService, require_family

logger = get_logger(__name__)

RICCI_SYMMETRY_TOL = 1e-8


class CurvatureCalculator:
    """Curvature of left-invariant metrics on Lie groups."""

    @staticmethod
    def levi_civita(g_frame: LieAlgebra) -> ConnectionTable:
        """
        Koszul formula in an orthonormal frame:
        gamma[i, j, k] = (c[k, i, j] + c[k, j, i] + c[i, j, k]) / 2.
        """
        c = g_frame.c
        gamma = 0.5 * (c.transpose(1, 2, 0) + c.transpose(2, 1, 0) + c)
        return ConnectionTable(gamma=gamma)

    @staticmethod
    def riemann(connection: ConnectionTable, g_frame: LieAlgebra) -> np.ndarray:
        gamma = connection.gamma
        c = g_frame.c
        return (
            np.einsum("jkm,iml->ijkl", gamma, gamma)
            - np.einsum("ikm,jml->ijkl", gamma, gamma)
            - np.einsum("ijm,mkl->ijkl", c, gamma)
        )

    @staticmethod
    def ricci_from_frame_algebra(g_frame: LieAlgebra, tol: Optional[float] = None) -> RicciReport:
        """
        Ricci operator of the metric making the current basis orthonormal.

        Raises:
            NumericalError: If the contracted tensor is not symmetric
        """
        R = CurvatureCalculator.riemann(CurvatureCalculator.levi_civita(g_frame), g_frame)
        ric = np.einsum("aiil->la", R)
        scale = max(1.0, float(np.max(np.abs(ric))))
        asym = float(np.max(np.abs(ric - ric.T)))
        if asym > RICCI_SYMMETRY_TOL * scale:
            raise NumericalError(f"Ricci operator is not symmetric (defect {asym:.3e})")
        report = CurvatureCalculator.report(0.5 * (ric + ric.T), tol)
        logger.debug("ricci: n=%d signature=%s scalar=%.6g", g_frame.dim, report.signature, report.scalar_curvature)
        return report

    @staticmethod
    def ricci_operator(g: LieAlgebra, G: MetricLike, tol: Optional[float] = None) -> RicciReport:
        """
        Ricci operator of an arbitrary inner product, in the orthonormal frame
        given by the triangular factor of G.

        Args:
            g: Lie algebra in any basis
            G: Gram matrix in the same basis

        Returns:
            RicciReport with the operator, sorted eigenvalues, signature and
            scalar curvature

        Raises:
            DimensionError: If G does not match g
            DefinitenessError: If G is not symmetric positive-definite
        """
        gram = as_gram(G)
        if gram.dim != g.dim:
            raise DimensionError(f"metric of dimension {gram.dim} for algebra of dimension {g.dim}")
        X = FrameReduction.gram_to_group_element(gram)
        return CurvatureCalculator.ricci_from_frame_algebra(LieAlgebraService.change_basis(g, X), tol)

    @staticmethod
    def closed_form_ricci(family_tag: FamilyTag, n: int, lam: float) -> np.ndarray:
        """
        Ricci operator of g_lam.<,>_0 in its Milnor frame.

        RH2_SUM_ABELIAN: diag(-1 - lam^2/2, -1 - lam^2/2, 0, ..., 0, lam^2/2).
        RH_LINE_SUM: diagonal -(n-2) - lam^2/2, -lam^2/2, -(n-2) (n-3 times),
        lam^2/2 - (n-2), coupled through Ric(x_2) = ... + (n-1) lam/2 x_n.
        """
        require_family(family_tag)
        if n < 3:
            raise DimensionError(f"{family_tag.value} requires dimension >= 3, got {n}")
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        half = 0.5 * lam * lam
        if family_tag is FamilyTag.RH2_SUM_ABELIAN:
            diag = np.zeros(n)
            diag[:2] = -1.0 - half
            diag[-1] = half
            return np.diag(diag)
        m = n - 2
        diag = np.full(n, -float(m))
        diag[0] = -m - half
        diag[1] = -half
        diag[-1] = half - m
        ric = np.diag(diag)
        ric[1, -1] = ric[-1, 1] = 0.5 * (n - 1) * lam
        return ric

    @staticmethod
    def closed_form_report(family_tag: FamilyTag, n: int, lam: float, tol: Optional[float] = None) -> RicciReport:
        """closed_form_ricci with its spectrum, signature and scalar curvature."""
        return CurvatureCalculator.report(CurvatureCalculator.closed_form_ricci(family_tag, n, lam), tol)

    @staticmethod
    def closed_form_ricci_eigenvalues(family_tag: FamilyTag, n: int, lam: float) -> np.ndarray:
        """
        Sorted spectrum of closed_form_ricci.

        For RH_LINE_SUM the (x_2, x_n) block contributes t / 2 for the roots t
        of t^2 + 2(n-2) t - lam^2 (lam^2 + (n-2)^2 + 1).
        """
        require_family(family_tag)
        if n < 3:
            raise DimensionError(f"{family_tag.value} requires dimension >= 3, got {n}")
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        half = 0.5 * lam * lam
        if family_tag is FamilyTag.RH2_SUM_ABELIAN:
            eig = [-1.0 - half, -1.0 - half] + [0.0] * (n - 3) + [half]
        else:
            m = n - 2
            disc = np.sqrt(m * m + lam * lam * (lam * lam + m * m + 1))
            eig = [-m - half] + [-float(m)] * (n - 3) + [0.5 * (-m - disc), 0.5 * (-m + disc)]
        return np.sort(np.array(eig, dtype=float))

    @staticmethod
    def block_characteristic_polynomial(n: int, lam: float, t: float) -> float:
        """det(t I - 2A) for the (x_2, x_n) block A of the RH_LINE_SUM operator."""
        m = n - 2
        return t * t + 2 * m * t - lam * lam * (lam * lam + m * m + 1)

    @staticmethod
    def signature(sym: np.ndarray, tol: Optional[float] = None) -> Signature:
        """
        Count (negative, zero, positive) eigenvalues of a symmetric matrix.

        An eigenvalue counts as zero when its absolute value is at most tol
        times the largest absolute eigenvalue.

        Raises:
            ShapeError: If sym is not square or not symmetric within tol
        """
        tol = settings.SIGNATURE_ZERO_TOL if tol is None else tol
        eig = _symmetric_eigenvalues(sym, tol)
        return _count_signs(eig, tol)

    @staticmethod
    def report(ric: np.ndarray, tol: Optional[float] = None) -> RicciReport:
        tol = settings.SIGNATURE_ZERO_TOL if tol is None else tol
        eig = _symmetric_eigenvalues(ric, tol)
        return RicciReport(
            ric=ric,
            eigenvalues=eig,
            signature=_count_signs(eig, tol),
            scalar_curvature=float(np.trace(ric)),
        )

    @staticmethod
    def expected_signatures(family_tag: FamilyTag, n: int) -> Dict[str, Signature]:
        """
        Signatures allowed for the family: "degenerate" when lam = 0 (the
        solvsoliton metric) and "generic" when lam > 0.
        """
        require_family(family_tag)
        if n < 3:
            raise DimensionError(f"{family_tag.value} requires dimension >= 3, got {n}")
        if family_tag is FamilyTag.RH2_SUM_ABELIAN:
            return {"degenerate": (2, n - 2, 0), "generic": (2, n - 3, 1)}
        return {"degenerate": (n - 1, 1, 0), "generic": (n - 1, 0, 1)}

    @staticmethod
    def allowed_signatures(family_tag: FamilyTag, n: int) -> Set[Signature]:
        return set(CurvatureCalculator.expected_signatures(family_tag, n).values())


def _symmetric_eigenvalues(sym: np.ndarray, tol: float) -> np.ndarray:
    A = np.asarray(sym, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    scale = float(np.max(np.abs(A), initial=0.0))
    if float(np.max(np.abs(A - A.T), initial=0.0)) > tol * scale:
        raise ShapeError("matrix is not symmetric")
    return scipy.linalg.eigvalsh(0.5 * (A + A.T))


def _count_signs(eig: np.ndarray, tol: float) -> Signature:
    s = float(np.max(np.abs(eig), initial=0.0))
    if s == 0.0:
        return (0, eig.size, 0)
    neg = int(np.sum(eig < -tol * s))
    pos = int(np.sum(eig > tol * s))
    return (neg, eig.size - neg - pos, pos)
