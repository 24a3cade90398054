"""
Acceptance Suite Service

Batch experiments over random and constructed metrics: the signature sweep
and the eight checks run by `verify-paper`. Every sample draws from its own
PCG64 stream keyed by (seed, check, family, n, index), so results do not
depend on the number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, TypeVar

import numpy as np

from app.core.logging import get_logger
from app.models.lie_algebra import FamilyTag
from app.models.metrics import GramMatrix
from app.schemas.reports import (
    CheckResult,
    SweepEntry,
    SweepReport,
    VerificationReport,
    signature_key,
)
from app.services.curvature_service import CurvatureCalculator
from app.services.derivation_service import DerivationAlgebra
from app.services.frame_reduction_service import FrameReduction
from app.services.lie_algebra_service import LieAlgebraService
from app.services.sampling_service import RandomMetrics
from app.services.solvsoliton_service import SolitonClassifier

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")

FAMILIES = (FamilyTag.RH2_SUM_ABELIAN, FamilyTag.RH_LINE_SUM)
SAMPLE_DIMS = (3, 4, 5, 6)
TABLE_DIMS = (3, 4, 5, 6, 7, 8)
CLOSED_FORM_LAMBDAS = (0.0, 0.5, 1.0, 2.0, 7.3)
TABLE_LAMBDAS = (0.0, 1.0, 2.0)
BLOCK_LAMBDAS = (0.0, 1.0, 3.0)
ORBIT_LAMBDAS = (0.0, 0.5, 1.0, 2.0)

DEFECT_TOL = 1e-8
CLOSED_FORM_TOL = 1e-9
TABLE_TOL = 1e-12
INVARIANCE_TOL = 1e-8
SOLITON_CONSTANT_TOL = 1e-10
EINSTEIN_GAP = 1e-3

# stream keys
_REDUCE, _SIGNATURE, _SOLITON, _ORBIT = 1, 2, 3, 4


def _map(fn: Callable[[T], R], items: Iterable[T], workers: int) -> List[R]:
    items = list(items)
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _family_index(family_tag: FamilyTag) -> int:
    return FAMILIES.index(family_tag)


def reference_connection(family_tag: FamilyTag, n: int, lam: float) -> np.ndarray:
    """Tabulated gamma[i, j, k] = <nabla_{x_i} x_j, x_k> in the Milnor frame."""
    gamma = np.zeros((n, n, n))
    h = 0.5 * lam
    last = n - 1
    if family_tag is FamilyTag.RH2_SUM_ABELIAN:
        gamma[0, 1, last] = h
        gamma[0, last, 1] = -h
        gamma[1, 0, 1] = -1.0
        gamma[1, 0, last] = -h
        gamma[1, 1, 0] = 1.0
        gamma[1, last, 0] = h
        gamma[last, 0, 1] = -h
        gamma[last, 1, 0] = h
        return gamma
    gamma[0, 1, last] = -h
    gamma[0, last, 1] = h
    gamma[1, 0, last] = h
    gamma[1, last, 0] = -h
    for i in range(2, last):
        gamma[i, 0, i] = -1.0
        gamma[i, i, 0] = 1.0
    gamma[last, 0, 1] = h
    gamma[last, 0, last] = -1.0
    gamma[last, 1, 0] = -h
    gamma[last, last, 0] = 1.0
    return gamma


def reference_curvature_vectors(
    family_tag: FamilyTag, n: int, lam: float
) -> Dict[Tuple[int, int], np.ndarray]:
    """Tabulated R(x_a, x_b) x_b, keyed by 0-based (a, b)."""
    last = n - 1
    q = 0.25 * lam * lam

    def e(idx: int, value: float) -> np.ndarray:
        v = np.zeros(n)
        v[idx] = value
        return v

    table: Dict[Tuple[int, int], np.ndarray] = {}
    if family_tag is FamilyTag.RH2_SUM_ABELIAN:
        table[(0, 1)] = e(0, -(1 + 3 * q))
        table[(1, 0)] = e(1, -(1 + 3 * q))
        table[(1, last)] = e(1, q)
        table[(last, 1)] = e(last, q)
        table[(0, last)] = e(0, q)
        table[(last, 0)] = e(last, q)
        return table

    table[(0, 1)] = e(0, -3 * q)
    table[(1, 0)] = e(1, -3 * q) + e(last, lam)
    table[(0, last)] = e(0, -(1 - q))
    table[(last, 0)] = e(1, lam) + e(last, -(1 - q))
    table[(1, last)] = e(1, q)
    table[(last, 1)] = e(last, q)
    for i in range(2, last):
        table[(0, i)] = e(0, -1.0)
        table[(i, 0)] = e(i, -1.0)
        table[(1, i)] = e(last, 0.5 * lam)
        table[(last, i)] = e(1, 0.5 * lam) + e(last, -1.0)
        for j in range(2, n):
            if j != i:
                table[(i, j)] = e(i, -1.0)
    return table


class AcceptanceSuite:
    """Signature sweeps and the full verification run."""

    @staticmethod
    def sample_metric(
        seed: int, stream: int, family_tag: FamilyTag, n: int, index: int
    ) -> Tuple[GramMatrix, np.random.Generator]:
        rng = RandomMetrics.generator(seed, stream, _family_index(family_tag), n, index)
        return RandomMetrics.draw_metric(rng, n), rng

    @staticmethod
    def orbit_metric(family_tag: FamilyTag, n: int, lam: float, rng: np.random.Generator) -> GramMatrix:
        """Gram matrix of (phi g_lam q).<,>_0 for random phi in R^x Aut(g) and q in O(n)."""
        phi = FrameReduction.random_automorphism(family_tag, n, rng)
        q = RandomMetrics.random_orthogonal(n, rng)
        return FrameReduction.group_element_to_gram(phi @ LieAlgebraService.representative(n, lam) @ q)

    @staticmethod
    def signature_sweep(
        seed: int,
        samples: int,
        families: Sequence[FamilyTag] = FAMILIES,
        dims: Sequence[int] = SAMPLE_DIMS,
        workers: int = 1,
    ) -> SweepReport:
        """
        Histogram of Ricci signatures of random metrics, computed by the
        generic pipeline, per (family, n).
        """
        entries = []
        for family_tag in families:
            for n in dims:
                g = LieAlgebraService.build_family(family_tag, n)
                expected = CurvatureCalculator.expected_signatures(family_tag, n)

                def one(s: int, family_tag=family_tag, n=n, g=g):
                    G, _ = AcceptanceSuite.sample_metric(seed, _SIGNATURE, family_tag, n, s)
                    return CurvatureCalculator.ricci_operator(g, G).signature

                sigs = _map(one, range(samples), workers)
                histogram: Dict[str, int] = {}
                for sig in sigs:
                    histogram[signature_key(sig)] = histogram.get(signature_key(sig), 0) + 1
                allowed = set(expected.values())
                entries.append(
                    SweepEntry(
                        family=family_tag.value,
                        dim=n,
                        samples=samples,
                        degenerate=signature_key(expected["degenerate"]),
                        generic=signature_key(expected["generic"]),
                        histogram=dict(sorted(histogram.items())),
                        unexpected=sum(1 for sig in sigs if sig not in allowed),
                    )
                )
                logger.info("signature_sweep: %s n=%d %s", family_tag.value, n, histogram)
        return SweepReport(seed=seed, samples=samples, entries=entries)

    @staticmethod
    def check_closed_form() -> CheckResult:
        worst = 0.0
        for family_tag in FAMILIES:
            for n in TABLE_DIMS:
                for lam in CLOSED_FORM_LAMBDAS:
                    frame_alg = LieAlgebraService.milnor_algebra(family_tag, n, lam)
                    ric = CurvatureCalculator.ricci_from_frame_algebra(frame_alg).ric
                    closed = CurvatureCalculator.closed_form_ricci(family_tag, n, lam)
                    worst = max(worst, float(np.max(np.abs(ric - closed))) / max(1.0, lam * lam))
        return CheckResult(
            name="closed-form Ricci operators",
            passed=worst <= CLOSED_FORM_TOL,
            detail=f"max relative deviation {worst:.3e}",
        )

    @staticmethod
    def check_connection_tables() -> CheckResult:
        worst = 0.0
        for family_tag in FAMILIES:
            for n in TABLE_DIMS:
                for lam in TABLE_LAMBDAS:
                    frame_alg = LieAlgebraService.milnor_algebra(family_tag, n, lam)
                    conn = CurvatureCalculator.levi_civita(frame_alg)
                    scale = max(1.0, lam * lam)
                    worst = max(
                        worst,
                        float(np.max(np.abs(conn.gamma - reference_connection(family_tag, n, lam)))) / scale,
                    )
                    R = CurvatureCalculator.riemann(conn, frame_alg)
                    for (a, b), expected in reference_curvature_vectors(family_tag, n, lam).items():
                        worst = max(worst, float(np.max(np.abs(R[a, b, b] - expected))) / scale)
        return CheckResult(
            name="connection and curvature tables",
            passed=worst <= TABLE_TOL,
            detail=f"max relative deviation {worst:.3e}",
        )

    @staticmethod
    def check_reduction(seed: int, per_dim: int, workers: int) -> CheckResult:
        def one(item: Tuple[FamilyTag, int, int]) -> Tuple[float, float]:
            family_tag, n, s = item
            g = LieAlgebraService.build_family(family_tag, n)
            G, rng = AcceptanceSuite.sample_metric(seed, _REDUCE, family_tag, n, s)
            frame = FrameReduction.reduce(g, G)
            defect = max(frame.orthonormality_defect, frame.bracket_defect)
            scale = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            scaled = FrameReduction.reduce(g, G.scaled(scale)).lam
            phi = FrameReduction.random_automorphism(family_tag, n, rng)
            pushed = FrameReduction.reduce(g, FrameReduction.pushforward_metric(G, phi)).lam
            drift = max(abs(scaled - frame.lam), abs(pushed - frame.lam)) / max(1.0, frame.lam)
            return defect, drift

        items = [(f, n, s) for f in FAMILIES for n in SAMPLE_DIMS for s in range(per_dim)]
        results = _map(one, items, workers)
        defect = max(r[0] for r in results)
        drift = max(r[1] for r in results)
        return CheckResult(
            name="reduction soundness and invariance",
            passed=defect <= DEFECT_TOL and drift <= INVARIANCE_TOL,
            detail=f"{len(items)} metrics, max defect {defect:.3e}, max lambda drift {drift:.3e}",
        )

    @staticmethod
    def check_signatures(seed: int, per_dim: int, workers: int) -> CheckResult:
        sweep = AcceptanceSuite.signature_sweep(seed, per_dim, FAMILIES, SAMPLE_DIMS, workers)
        unexpected = sum(e.unexpected for e in sweep.entries)
        misplaced = 0
        for family_tag in FAMILIES:
            for n in SAMPLE_DIMS:
                g = LieAlgebraService.build_family(family_tag, n)
                expected = CurvatureCalculator.expected_signatures(family_tag, n)
                rng = RandomMetrics.generator(seed, _ORBIT, _family_index(family_tag), n)
                for lam in ORBIT_LAMBDAS:
                    G = AcceptanceSuite.orbit_metric(family_tag, n, lam, rng)
                    want = expected["degenerate"] if lam == 0 else expected["generic"]
                    if CurvatureCalculator.ricci_operator(g, G).signature != want:
                        misplaced += 1
        return CheckResult(
            name="Ricci signature dichotomy",
            passed=unexpected == 0 and misplaced == 0,
            detail=f"{unexpected} random metrics outside the declared pair, "
            f"{misplaced} constructed metrics with the wrong signature",
        )

    @staticmethod
    def check_block_polynomial() -> CheckResult:
        worst = 0.0
        for n in TABLE_DIMS:
            last = n - 1
            for lam in BLOCK_LAMBDAS:
                ric = CurvatureCalculator.closed_form_ricci(FamilyTag.RH_LINE_SUM, n, lam)
                block = ric[np.ix_([1, last], [1, last])]
                for t in 2.0 * np.linalg.eigvalsh(block):
                    value = CurvatureCalculator.block_characteristic_polynomial(n, lam, t)
                    worst = max(worst, abs(value) / max(1.0, t * t))
                    if lam == 0:
                        worst = max(worst, abs(t * t + 2 * (n - 2) * t) / max(1.0, t * t))
                spectrum = np.linalg.eigvalsh(ric)
                closed = CurvatureCalculator.closed_form_ricci_eigenvalues(FamilyTag.RH_LINE_SUM, n, lam)
                worst = max(worst, float(np.max(np.abs(spectrum - closed))) / max(1.0, lam * lam))
        return CheckResult(
            name="rh-line block characteristic polynomial",
            passed=worst <= DEFECT_TOL,
            detail=f"max relative residual {worst:.3e}",
        )

    @staticmethod
    def check_solitons(seed: int, per_dim: int, workers: int) -> Tuple[CheckResult, CheckResult]:
        def one(item: Tuple[FamilyTag, int, int]) -> Tuple[bool, float]:
            family_tag, n, s = item
            g = LieAlgebraService.build_family(family_tag, n)
            G, _ = AcceptanceSuite.sample_metric(seed, _SOLITON, family_tag, n, s)
            verdict, frame = SolitonClassifier.classify_metric(g, G)
            agrees = verdict.is_solvsoliton == (frame.lam == 0.0) and not verdict.is_einstein
            gap = verdict.einstein_residual / verdict.ric_norm
            return agrees, gap

        items = [(f, n, s) for f in FAMILIES for n in TABLE_DIMS for s in range(per_dim)]
        results = _map(one, items, workers)
        disagreements = sum(1 for agrees, _ in results if not agrees)
        min_gap = min(gap for _, gap in results)

        orbit_failures = 0
        worst_c = 0.0
        for family_tag in FAMILIES:
            for n in SAMPLE_DIMS:
                g = LieAlgebraService.build_family(family_tag, n)
                rng = RandomMetrics.generator(seed, _SOLITON, _ORBIT, _family_index(family_tag), n)
                expected_c = -1.0 if family_tag is FamilyTag.RH2_SUM_ABELIAN else -float(n - 2)
                for lam in ORBIT_LAMBDAS:
                    verdict, frame = SolitonClassifier.classify_metric(
                        g, AcceptanceSuite.orbit_metric(family_tag, n, lam, rng)
                    )
                    if verdict.is_solvsoliton != (lam == 0):
                        orbit_failures += 1
                    if lam == 0:
                        worst_c = max(worst_c, abs(verdict.c - expected_c))
                canonical, _ = SolitonClassifier.classify_metric(g, np.eye(n))
                worst_c = max(worst_c, abs(canonical.c - expected_c))

        soliton = CheckResult(
            name="solvsoliton classification",
            passed=disagreements == 0 and orbit_failures == 0 and worst_c <= SOLITON_CONSTANT_TOL,
            detail=f"{disagreements} random disagreements, {orbit_failures} constructed failures, "
            f"soliton constant error {worst_c:.3e}",
        )
        einstein = CheckResult(
            name="no Einstein metrics",
            passed=min_gap > EINSTEIN_GAP,
            detail=f"smallest relative Einstein residual {min_gap:.3e}",
        )
        return soliton, einstein

    @staticmethod
    def check_derivations() -> CheckResult:
        failures = []
        for family_tag in FAMILIES:
            for n in TABLE_DIMS:
                g = LieAlgebraService.build_family(family_tag, n)
                basis = DerivationAlgebra.derivation_basis(g)
                if basis.dim != (n - 2) ** 2 + n or not DerivationAlgebra.pattern_check(g, basis):
                    failures.append(f"{family_tag.value}/{n}")
        return CheckResult(
            name="derivation algebras",
            passed=not failures,
            detail="dimension (n-2)^2 + n and block pattern"
            + (f"; failed for {', '.join(failures)}" if failures else ""),
        )

    @staticmethod
    def verify(seed: int = 0, samples: int = 1000, workers: int = 1) -> VerificationReport:
        """
        Run every acceptance check.

        Args:
            seed: Base seed for all random streams
            samples: Random metrics per family, split evenly over n = 3..6
            workers: Thread count for the sampled checks

        Returns:
            VerificationReport, passed iff every check passed
        """
        per_dim = max(1, samples // len(SAMPLE_DIMS))
        soliton, einstein = AcceptanceSuite.check_solitons(seed, per_dim, workers)
        checks = [
            AcceptanceSuite.check_closed_form(),
            AcceptanceSuite.check_connection_tables(),
            AcceptanceSuite.check_reduction(seed, per_dim, workers),
            AcceptanceSuite.check_signatures(seed, per_dim, workers),
            AcceptanceSuite.check_block_polynomial(),
            soliton,
            einstein,
            AcceptanceSuite.check_derivations(),
        ]
        for check in checks:
            logger.info("verify: %s %s (%s)", "PASS" if check.passed else "FAIL", check.name, check.detail)
        return VerificationReport(
            seed=seed,
            samples=samples,
            passed=all(c.passed for c in checks),
            checks=checks,
        )
