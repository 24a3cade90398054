"""
Frame Reduction Service

Reduces a left-invariant inner product on g_RH2 + R^(n-2) or g_RH(n-1) + R
to a Milnor-type frame. Every inner product on these algebras is, up to
scaling and automorphism, one of g_lam.<,>_0 with lam >= 0; the reduction
writes the triangular group element of the metric as g_lam = phi g K with
phi in R^x Aut(g) and K orthogonal, then reads the frame off phi.

Group elements act on inner products by g.<u, v> = <g^-1 u, g^-1 v>.
"""

from typing import Optional, Union

import numpy as np
import scipy.linalg

from app.core.exceptions import DimensionError, NumericalError, ShapeError, SingularMatrixError
from app.core.logging import get_logger
from app.core.settings import settings
from app.models.lie_algebra import FamilyTag, LieAlgebra, is_invertible
from app.models.metrics import DoubleCosetReduction, GramMatrix, MilnorFrame, OrbitCertificate
from app.services.derivation_service import DerivationAlgebra
from app.services.lie_algebra_service import LieAlgebraService, require_family, rewrite_constants
from app.services.sampling_service import RandomMetrics

logger = get_logger(__name__)

ORBIT_TOL = 1e-6
AUT_TOL = 1e-9

MetricLike = Union[GramMatrix, np.ndarray]


def as_gram(G: MetricLike) -> GramMatrix:
    return G if isinstance(G, GramMatrix) else GramMatrix(np.asarray(G, dtype=float))


class FrameReduction:
    """Milnor frames, double coset reduction and orbit comparison."""

    @staticmethod
    def gram_to_group_element(G: MetricLike) -> np.ndarray:
        """
        Lower-triangular g with positive diagonal such that (g g^T)^-1 = G.

        With J the reversal permutation, the Cholesky factor of J G J gives an
        upper-triangular U with G = U U^T; then g = U^-T.
        """
        G = as_gram(G).G
        n = G.shape[0]
        J = np.eye(n)[::-1]
        L = scipy.linalg.cholesky(J @ G @ J, lower=True)
        U = J @ L @ J
        return scipy.linalg.solve_triangular(U, np.eye(n), lower=False).T

    @staticmethod
    def group_element_to_gram(g: np.ndarray) -> GramMatrix:
        """Gram matrix (g g^T)^-1 of g.<,>_0."""
        g = np.asarray(g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeError(f"group element must be square, got {g.shape}")
        g_inv = np.linalg.inv(g)
        G = g_inv.T @ g_inv
        return GramMatrix(0.5 * (G + G.T))

    @staticmethod
    def pushforward_metric(G: MetricLike, phi: np.ndarray) -> GramMatrix:
        """Gram matrix of phi.<,>: phi^-T G phi^-1."""
        G = as_gram(G).G
        phi = np.asarray(phi, dtype=float)
        if phi.shape != G.shape:
            raise DimensionError(f"group element of shape {phi.shape} for metric of shape {G.shape}")
        phi_inv = np.linalg.inv(phi)
        pushed = phi_inv.T @ G @ phi_inv
        return GramMatrix(0.5 * (pushed + pushed.T))

    @staticmethod
    def automorphism_mask(n: int) -> np.ndarray:
        """Entries allowed to be nonzero for elements of R^x Aut(g)."""
        allowed = DerivationAlgebra.pattern_mask(n)
        allowed[0, 0] = True
        return allowed

    @staticmethod
    def random_automorphism(
        family_tag: FamilyTag,
        n: int,
        rng: np.random.Generator,
        scalar: bool = True,
    ) -> np.ndarray:
        """
        Random element of R^x Aut(g), or of Aut(g) when scalar is False.

        The lower-right block is kept moderately conditioned so that pushed
        metrics stay within reach of the reduction tolerances.
        """
        require_family(family_tag)
        if n < 3:
            raise DimensionError(f"{family_tag.value} requires dimension >= 3, got {n}")
        phi = np.zeros((n, n))
        phi[0, 0] = RandomMetrics.random_positive_scales(rng, 1)[0] if scalar else 1.0
        phi[1, 0] = 0.5 * rng.standard_normal()
        phi[1, 1] = RandomMetrics.random_positive_scales(rng, 1)[0]
        phi[2:, 0] = 0.5 * rng.standard_normal(n - 2)
        m = n - 2
        B = (
            RandomMetrics.random_rotation(m, rng)
            @ np.diag(RandomMetrics.random_positive_scales(rng, m))
            @ RandomMetrics.random_rotation(m, rng)
        )
        phi[2:, 2:] = B
        if scalar:
            phi[1:, :] *= phi[0, 0]
        return phi

    @staticmethod
    def reduce_group_element(g_alg: LieAlgebra, g: np.ndarray) -> DoubleCosetReduction:
        """
        Factor g_lam = phi g K with phi in R^x Aut(g) and K orthogonal.

        Steps: an orthogonal K1 makes L = g K1 lower triangular; a block
        diagonal automorphism normalizes the diagonal blocks of L; a shear
        kills the first column below the top block; an orthogonal map of the
        last n - 2 coordinates sends the remaining column to -lam e_n.

        Raises:
            UnsupportedFamilyError: If g_alg is not one of the two families
            DimensionError: If g does not match the algebra
            SingularMatrixError: If g is not invertible
        """
        require_family(g_alg.family_tag)
        g = np.asarray(g, dtype=float)
        n = g_alg.dim
        if g.shape != (n, n):
            raise DimensionError(f"group element of shape {g.shape} for algebra of dimension {n}")
        if not is_invertible(g):
            raise SingularMatrixError("group element is singular")

        Q, R = scipy.linalg.qr(g.T)
        signs = np.where(np.diag(R) < 0, -1.0, 1.0)
        K1 = Q * signs
        L = (signs[:, None] * R).T

        A1, A3, A4 = L[:2, :2], L[2:, :2], L[2:, 2:]
        phi2 = scipy.linalg.block_diag(np.linalg.inv(A1), np.linalg.inv(A4))
        V = scipy.linalg.solve_triangular(A4, A3, lower=True)
        shear = np.eye(n)
        shear[2:, 0] = -V[:, 0]

        v2 = V[:, 1]
        raw_lambda = float(np.linalg.norm(v2))
        B = _rotate_to_last(v2, raw_lambda)
        phi3 = scipy.linalg.block_diag(np.eye(2), B)

        phi = phi3 @ shear @ phi2
        K = K1 @ phi3.T
        lam = 0.0 if raw_lambda < settings.LAMBDA_SNAP_THRESHOLD else raw_lambda
        return DoubleCosetReduction(lam=lam, raw_lambda=raw_lambda, phi=phi, orthogonal=K)

    @staticmethod
    def reduce(g_alg: LieAlgebra, G: MetricLike, tol: Optional[float] = None) -> MilnorFrame:
        """
        Compute a Milnor-type frame for an inner product.

        Args:
            g_alg: One of the two families in its canonical basis
            G: Gram matrix in the canonical basis
            tol: Largest acceptable defect; defaults to settings.MILNOR_TOL

        Returns:
            MilnorFrame whose columns are orthonormal for k <,> and satisfy
            the Milnor relations with parameter lam

        Raises:
            UnsupportedFamilyError: If g_alg is CUSTOM
            DimensionError: If G does not match the algebra
            DefinitenessError: If G is not symmetric positive-definite
            NumericalError: If a defect exceeds tol on a well-conditioned input
        """
        require_family(g_alg.family_tag)
        tol = settings.MILNOR_TOL if tol is None else tol
        gram = as_gram(G)
        n = g_alg.dim
        if gram.dim != n:
            raise DimensionError(f"metric of dimension {gram.dim} for algebra of dimension {n}")

        g = FrameReduction.gram_to_group_element(gram)
        red = FrameReduction.reduce_group_element(g_alg, g)

        phi_inv = np.linalg.inv(red.phi)
        c = float(phi_inv[0, 0])
        psi = phi_inv / c
        k = c * c
        X = psi @ LieAlgebraService.representative(n, red.raw_lambda)

        orth_defect = float(np.max(np.abs(k * X.T @ gram.G @ X - np.eye(n))))
        if not is_invertible(X):
            raise NumericalError("reduction produced a singular frame")
        frame_c = rewrite_constants(g_alg.c, X)
        target = LieAlgebraService.milnor_algebra(g_alg.family_tag, n, red.lam)
        bracket_defect = float(np.max(np.abs(frame_c - target.c))) / max(1.0, red.lam)

        cond = gram.condition_number()
        warning = cond > settings.CONDITION_WARNING_THRESHOLD
        if warning:
            logger.warning("reduce: ill-conditioned metric (cond=%.3e), residuals may be inaccurate", cond)
        if not warning and (orth_defect > tol or bracket_defect > tol):
            raise NumericalError(
                f"reduction failed its checks: orthonormality defect {orth_defect:.3e}, "
                f"bracket defect {bracket_defect:.3e}, tolerance {tol:.3e}"
            )
        logger.debug(
            "reduce: %s n=%d lambda=%.6g (raw %.3e) k=%.6g",
            g_alg.family_tag.value,
            n,
            red.lam,
            red.raw_lambda,
            k,
        )
        return MilnorFrame(
            family_tag=g_alg.family_tag,
            lam=red.lam,
            scale_k=k,
            frame=X,
            automorphism=psi,
            orthonormality_defect=orth_defect,
            bracket_defect=bracket_defect,
            condition_number=cond,
            conditioning_warning=warning,
            raw_lambda=red.raw_lambda,
        )

    @staticmethod
    def orbit_parameter_equal(
        g_alg: LieAlgebra, G1: MetricLike, G2: MetricLike, tol: float = ORBIT_TOL
    ) -> bool:
        """True iff the two metrics reduce to the same lam within tol."""
        lam1 = FrameReduction.reduce(g_alg, G1).lam
        lam2 = FrameReduction.reduce(g_alg, G2).lam
        return abs(lam1 - lam2) <= tol

    @staticmethod
    def orbit_certificate(
        g_alg: LieAlgebra, G1: MetricLike, G2: MetricLike, tol: float = ORBIT_TOL
    ) -> Optional[OrbitCertificate]:
        """
        Exhibit s and psi in Aut(g) with G2 = (s psi).G1, or None when the two
        metrics have different parameters.
        """
        G1, G2 = as_gram(G1), as_gram(G2)
        f1 = FrameReduction.reduce(g_alg, G1)
        f2 = FrameReduction.reduce(g_alg, G2)
        if abs(f1.lam - f2.lam) > tol:
            return None
        scalar = float(np.sqrt(f2.scale_k / f1.scale_k))
        psi = f2.automorphism @ np.linalg.inv(f1.automorphism)
        pushed = FrameReduction.pushforward_metric(G1, scalar * psi)
        defect = float(np.max(np.abs(pushed.G - G2.G))) / G2.norm
        return OrbitCertificate(lam=0.5 * (f1.lam + f2.lam), scalar=scalar, automorphism=psi, defect=defect)

    @staticmethod
    def validate_aut_element(g_alg: LieAlgebra, M: np.ndarray, tol: float = AUT_TOL) -> bool:
        """
        Check whether M lies in R^x Aut(g).

        For the two families M must follow the automorphism pattern with a
        nonzero (1, 1) entry c, and M / c must preserve the bracket. For a
        custom algebra M itself must preserve the bracket.
        """
        M = np.asarray(M, dtype=float)
        n = g_alg.dim
        if M.shape != (n, n) or not np.all(np.isfinite(M)):
            return False
        scale = max(float(np.max(np.abs(M))), 1e-300)
        if g_alg.family_tag.is_family:
            forbidden = ~FrameReduction.automorphism_mask(n)
            if np.max(np.abs(M[forbidden]), initial=0.0) > tol * scale:
                return False
            c = M[0, 0]
            if abs(c) <= tol * scale:
                return False
            psi = M / c
        else:
            psi = M
        if not is_invertible(psi):
            return False
        lhs = np.einsum("km,ijm->ijk", psi, g_alg.c)
        rhs = np.einsum("ai,bj,abk->ijk", psi, psi, g_alg.c)
        iu, ju = np.triu_indices(n, 1)
        defect = float(np.max(np.abs(lhs[iu, ju] - rhs[iu, ju]), initial=0.0))
        return defect <= tol * max(1.0, float(np.max(np.abs(psi))) ** 2)


def _rotate_to_last(v: np.ndarray, norm: float) -> np.ndarray:
    """Element of SO(m) sending v to -norm e_m; a sign when m = 1."""
    m = v.shape[0]
    if m == 1:
        return np.array([[-1.0 if v[0] > 0 else 1.0]])
    target = np.zeros(m)
    target[-1] = -norm
    u = v - target
    if np.linalg.norm(u) <= 1e-15 * max(1.0, norm):
        return np.eye(m)
    H = np.eye(m) - 2.0 * np.outer(u, u) / (u @ u)
    S = np.eye(m)
    S[0, 0] = -1.0
    return S @ H
