"""
Text rendering of reports, in the notation of the frame theory: lambda is
printed as λ, the scale as k and Ricci signatures as (−,0,+).
"""

from functools import singledispatch
from typing import List, Optional

import numpy as np

from app.schemas.config import OutputFormat
from app.schemas.reports import (
    CurvatureReport,
    DerivationsReport,
    FrameReport,
    ReportModel,
    SolitonReport,
    SweepReport,
    VerificationReport,
)
from app.services.file_formats import format_matrix

PRECISION = 10


def _num(x: float) -> str:
    return f"{x:.{PRECISION}g}"


def _matrix(rows: List[List[float]]) -> str:
    return format_matrix(np.array(rows), PRECISION).rstrip("\n")


def _header(family: str, dim: int, lam: Optional[float], k: Optional[float]) -> List[str]:
    lines = [f"family: {family}  n = {dim}"]
    if lam is not None:
        lines.append(f"λ = {_num(lam)}")
    if k is not None:
        lines.append(f"k = {_num(k)}")
    return lines


def render(report: ReportModel, output: OutputFormat) -> str:
    if output is OutputFormat.JSON:
        return report.to_json()
    return render_text(report)


@singledispatch
def render_text(report: ReportModel) -> str:
    return report.to_json()


@render_text.register
def _(report: FrameReport) -> str:
    r = report.residuals
    lines = _header(report.family, report.dim, report.lam, report.k)
    lines += [
        "frame X (column i is x_i):",
        _matrix(report.frame),
        "automorphism φ:",
        _matrix(report.automorphism),
        f"residuals: orthonormality {r.orthonormality_defect:.3e}, "
        f"bracket {r.bracket_defect:.3e}, cond(G) {r.condition_number:.3e}",
    ]
    if r.conditioning_warning:
        lines.append("warning: ill-conditioned metric, residuals may be inaccurate")
    return "\n".join(lines)


@render_text.register
def _(report: CurvatureReport) -> str:
    s = report.signature
    lines = _header(report.family, report.dim, report.lam, report.k)
    lines += [
        "Ric:",
        _matrix(report.ric),
        "eigenvalues: " + " ".join(_num(v) for v in report.eigenvalues),
        f"signature (−,0,+) = ({s.negative},{s.zero},{s.positive})",
        f"scalar curvature: {_num(report.scalar_curvature)}",
    ]
    return "\n".join(lines)


@render_text.register
def _(report: DerivationsReport) -> str:
    lines = _header(report.family, report.dim, report.lam, None)
    lines.append(f"dim Der(g) = {report.derivation_dim}")
    if report.pattern_ok is not None:
        lines.append(f"pattern check: {'ok' if report.pattern_ok else 'FAILED'}")
    for j, mat in enumerate(report.basis, start=1):
        lines.append(f"D_{j}:")
        lines.append(_matrix(mat))
    return "\n".join(lines)


@render_text.register
def _(report: SolitonReport) -> str:
    lines = _header(report.family, report.dim, report.lam, report.k)
    if report.is_solvsoliton:
        lines.append(f"solvsoliton: yes, Ric = c I + D with c = {_num(report.c)} (k = 1 normalization)")
    else:
        lines.append("solvsoliton: no")
    lines.append(f"residual: {report.residual:.3e}")
    lines.append(
        f"Einstein: {'yes' if report.is_einstein else 'no'} "
        f"(tr Ric / n = {_num(report.einstein_constant)}, residual {report.einstein_residual:.3e})"
    )
    if report.conditioning_warning:
        lines.append("warning: ill-conditioned metric")
    return "\n".join(lines)


@render_text.register
def _(report: SweepReport) -> str:
    lines = [f"seed = {report.seed}, samples per (family, n) = {report.samples}"]
    for e in report.entries:
        counts = ", ".join(f"{sig} x{count}" for sig, count in e.histogram.items())
        lines.append(
            f"{e.family} n={e.dim}: {counts}  [λ = 0: {e.degenerate}, λ > 0: {e.generic}]"
            + (f"  UNEXPECTED {e.unexpected}" if e.unexpected else "")
        )
    return "\n".join(lines)


@render_text.register
def _(report: VerificationReport) -> str:
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in report.checks]
    failed = sum(1 for c in report.checks if not c.passed)
    lines.append("all checks passed" if not failed else f"{failed} check(s) failed")
    return "\n".join(lines)
