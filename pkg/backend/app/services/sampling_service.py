"""
Random Metric Sampling Service

Reproducible random inner products, orthogonal matrices and pattern
automorphisms for experiments and property checks.

All randomness flows through numpy's PCG64 bit generator seeded by a
SeedSequence, which yields the same stream on every platform for a fixed
numpy major version. PCG64 is a 128-bit linear congruential generator with a
permuted (xorshift-low, random-rotate) 64-bit output.
"""

from typing import Optional

import numpy as np
import scipy.linalg

from app.core.exceptions import DimensionError, NumericalError
from app.core.logging import get_logger
from app.core.settings import settings
from app.models.metrics import GramMatrix
from app.schemas.config import RandomMetricSpec

logger = get_logger(__name__)

JITTER = 1e-6


class RandomMetrics:
    """Seeded sampling of metrics and group elements."""

    @staticmethod
    def generator(seed: int, *keys: int) -> np.random.Generator:
        """PCG64 generator for `seed`, optionally split by extra integer keys."""
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))

    @staticmethod
    def sample_metric(spec: RandomMetricSpec, n: int) -> GramMatrix:
        """
        Draw a random SPD Gram matrix G = A^T A + eps I, eps = 1e-6 ||A^T A||.

        Args:
            spec: Seed and conditioning cap
            n: Dimension, at least 2

        Returns:
            GramMatrix with condition number below spec.cond_cap

        Raises:
            DimensionError: If n < 2
            NumericalError: If no draw meets the cap within the attempt budget
        """
        return RandomMetrics.draw_metric(RandomMetrics.generator(spec.seed, n), n, spec.cond_cap)

    @staticmethod
    def draw_metric(rng: np.random.Generator, n: int, cond_cap: Optional[float] = None) -> GramMatrix:
        if n < 2:
            raise DimensionError(f"metrics need dimension >= 2, got {n}")
        cap = cond_cap or settings.RANDOM_METRIC_COND_CAP
        for attempt in range(settings.RANDOM_METRIC_MAX_ATTEMPTS):
            A = rng.standard_normal((n, n))
            M = A.T @ A
            G = M + JITTER * np.linalg.norm(M, 2) * np.eye(n)
            G = 0.5 * (G + G.T)
            if np.linalg.cond(G) < cap:
                if attempt:
                    logger.debug("draw_metric: accepted after %d redraws", attempt)
                return GramMatrix(G)
        raise NumericalError(
            f"no metric with condition number below {cap:.3e} after "
            f"{settings.RANDOM_METRIC_MAX_ATTEMPTS} draws"
        )

    @staticmethod
    def random_rotation(m: int, rng: np.random.Generator) -> np.ndarray:
        """Haar-distributed element of SO(m), m >= 1."""
        if m == 1:
            return np.ones((1, 1))
        Q, R = scipy.linalg.qr(rng.standard_normal((m, m)))
        Q = Q * np.where(np.diag(R) < 0, -1.0, 1.0)
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        return Q

    @staticmethod
    def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
        """Element of O(n); the determinant sign is random as well."""
        Q = RandomMetrics.random_rotation(n, rng)
        if rng.random() < 0.5:
            Q[:, -1] = -Q[:, -1]
        return Q

    @staticmethod
    def random_positive_scales(rng: np.random.Generator, size: int, spread: float = 0.3) -> np.ndarray:
        return np.exp(spread * rng.standard_normal(size))

