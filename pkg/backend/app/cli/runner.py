"""
Subcommand dispatch.

`run` maps a validated RunConfig to a report and an exit code: 0 on success,
1 on invalid input, 2 when a computation fails its own checks.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from app.cli.dependencies import get_algebra, get_metric
from app.core.exceptions import MilnorError, NumericalError
from app.core.logging import get_logger
from app.models.metrics import GramMatrix
from app.schemas.config import RunConfig, Subcommand
from app.schemas.reports import (
    CurvatureReport,
    DerivationsReport,
    FrameReport,
    ReportModel,
    SolitonReport,
)
from app.services.acceptance_service import AcceptanceSuite
from app.services.curvature_service import CurvatureCalculator
from app.services.derivation_service import DerivationAlgebra
from app.services.frame_reduction_service import FrameReduction
from app.services.lie_algebra_service import LieAlgebraService
from app.services.solvsoliton_service import SolitonClassifier

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2


@dataclass
class RunResult:
    exit_code: int
    report: Optional[ReportModel] = None
    error: Optional[str] = None


Handler = Callable[[RunConfig], Tuple[ReportModel, int]]


def _reduce(config: RunConfig) -> Tuple[ReportModel, int]:
    g = get_algebra(config)
    frame = FrameReduction.reduce(g, get_metric(config, g.dim), config.tol)
    return FrameReport.from_frame(frame), EXIT_OK


def _curvature(config: RunConfig) -> Tuple[ReportModel, int]:
    g = get_algebra(config)
    family = g.family_tag.value
    if config.lam is not None:
        frame_alg = LieAlgebraService.milnor_algebra(g.family_tag, g.dim, config.lam)
        ricci = CurvatureCalculator.ricci_from_frame_algebra(frame_alg)
        return CurvatureReport.from_ricci(ricci, family, lam=config.lam, k=1.0), EXIT_OK

    G = get_metric(config, g.dim)
    if G is None:
        G = GramMatrix.identity(g.dim)
    ricci = CurvatureCalculator.ricci_operator(g, G)
    lam = k = None
    if g.family_tag.is_family:
        try:
            frame = FrameReduction.reduce(g, G, config.tol)
            lam, k = frame.lam, frame.scale_k
        except NumericalError as exc:
            logger.warning("curvature: reporting Ricci without lambda and k (%s)", exc)
    return CurvatureReport.from_ricci(ricci, family, lam=lam, k=k), EXIT_OK


def _derivations(config: RunConfig) -> Tuple[ReportModel, int]:
    g = get_algebra(config)
    basis = DerivationAlgebra.derivation_basis(g)
    pattern_ok = None
    if config.lam is not None:
        basis = DerivationAlgebra.conjugated_derivation_basis(basis, config.lam)
    elif g.family_tag.is_family:
        pattern_ok = DerivationAlgebra.pattern_check(g, basis)
    report = DerivationsReport.from_basis(g.family_tag.value, basis.mats, lam=config.lam, pattern_ok=pattern_ok)
    return report, EXIT_OK


def _solvsoliton(config: RunConfig) -> Tuple[ReportModel, int]:
    g = get_algebra(config)
    verdict, frame = SolitonClassifier.classify_metric(g, get_metric(config, g.dim), config.tol)
    return SolitonReport.from_verdict(verdict, frame), EXIT_OK


def _signature_sweep(config: RunConfig) -> Tuple[ReportModel, int]:
    report = AcceptanceSuite.signature_sweep(
        config.seed or 0, config.samples, config.families, config.dims, config.workers
    )
    return report, EXIT_OK if report.ok else EXIT_NUMERICAL


def _verify(config: RunConfig) -> Tuple[ReportModel, int]:
    report = AcceptanceSuite.verify(config.seed or 0, config.samples, config.workers)
    return report, EXIT_OK if report.passed else EXIT_NUMERICAL


HANDLERS: Dict[Subcommand, Handler] = {
    Subcommand.REDUCE: _reduce,
    Subcommand.CURVATURE: _curvature,
    Subcommand.DERIVATIONS: _derivations,
    Subcommand.SOLVSOLITON: _solvsoliton,
    Subcommand.SIGNATURE_SWEEP: _signature_sweep,
    Subcommand.VERIFY_PAPER: _verify,
}


def run(config: RunConfig) -> RunResult:
    """Execute one subcommand; never raises for input or numerical errors."""
    try:
        report, code = HANDLERS[config.subcommand](config)
    except NumericalError as exc:
        return RunResult(exit_code=EXIT_NUMERICAL, error=str(exc))
    except (MilnorError, ValueError, OSError) as exc:
        return RunResult(exit_code=EXIT_INVALID, error=str(exc))
    return RunResult(exit_code=code, report=report)

