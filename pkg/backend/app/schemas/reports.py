"""
JSON report schemas emitted by the command-line front end.

Fields are plain lists and floats so that a report parsed back with
`model_validate_json` re-emits byte-identical text through `to_json`.
"""

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.models.curvature import RicciReport, Signature
from app.models.metrics import MilnorFrame
from app.models.solvsoliton import SolitonVerdict

Matrix = List[List[float]]


def signature_key(sig: Signature) -> str:
    return "({},{},{})".format(*sig)


class ReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True)


class SignatureCounts(ReportModel):
    negative: int
    zero: int
    positive: int

    @classmethod
    def from_signature(cls, sig: Signature) -> "SignatureCounts":
        return cls(negative=sig[0], zero=sig[1], positive=sig[2])

    def as_tuple(self) -> Signature:
        return (self.negative, self.zero, self.positive)


class Residuals(ReportModel):
    orthonormality_defect: float
    bracket_defect: float
    condition_number: float
    conditioning_warning: bool


class FrameReport(ReportModel):
    family: str
    dim: int
    lam: float = Field(alias="lambda")
    k: float
    frame: Matrix
    automorphism: Matrix
    residuals: Residuals

    @classmethod
    def from_frame(cls, frame: MilnorFrame) -> "FrameReport":
        return cls(
            family=frame.family_tag.value,
            dim=frame.dim,
            lam=frame.lam,
            k=frame.scale_k,
            frame=frame.frame.tolist(),
            automorphism=frame.automorphism.tolist(),
            residuals=Residuals(**frame.residuals),
        )


class CurvatureReport(ReportModel):
    family: str
    dim: int
    lam: Optional[float] = Field(default=None, alias="lambda")
    k: Optional[float] = None
    ric: Matrix
    eigenvalues: List[float]
    signature: SignatureCounts
    scalar_curvature: float

    @classmethod
    def from_ricci(
        cls,
        report: RicciReport,
        family: str,
        lam: Optional[float] = None,
        k: Optional[float] = None,
    ) -> "CurvatureReport":
        return cls(
            family=family,
            dim=report.dim,
            lam=lam,
            k=k,
            ric=report.ric.tolist(),
            eigenvalues=report.eigenvalues.tolist(),
            signature=SignatureCounts.from_signature(report.signature),
            scalar_curvature=report.scalar_curvature,
        )


class DerivationsReport(ReportModel):
    family: str
    dim: int
    lam: Optional[float] = Field(default=None, alias="lambda")
    derivation_dim: int
    pattern_ok: Optional[bool] = None
    basis: List[Matrix]

    @classmethod
    def from_basis(
        cls,
        family: str,
        mats: np.ndarray,
        lam: Optional[float] = None,
        pattern_ok: Optional[bool] = None,
    ) -> "DerivationsReport":
        return cls(
            family=family,
            dim=int(mats.shape[1]),
            lam=lam,
            derivation_dim=int(mats.shape[0]),
            pattern_ok=pattern_ok,
            basis=mats.tolist(),
        )


class SolitonReport(ReportModel):
    family: str
    dim: int
    lam: float = Field(alias="lambda")
    k: float
    is_solvsoliton: bool
    c: float
    derivation_coeffs: List[float]
    derivation: Matrix
    residual: float
    is_einstein: bool
    einstein_constant: float
    einstein_residual: float
    conditioning_warning: bool

    @classmethod
    def from_verdict(cls, verdict: SolitonVerdict, frame: MilnorFrame) -> "SolitonReport":
        return cls(
            family=frame.family_tag.value,
            dim=frame.dim,
            lam=frame.lam,
            k=frame.scale_k,
            is_solvsoliton=verdict.is_solvsoliton,
            c=verdict.c,
            derivation_coeffs=verdict.derivation_coeffs.tolist(),
            derivation=verdict.derivation.tolist(),
            residual=verdict.residual,
            is_einstein=verdict.is_einstein,
            einstein_constant=verdict.einstein_constant,
            einstein_residual=verdict.einstein_residual,
            conditioning_warning=frame.conditioning_warning,
        )


class SweepEntry(ReportModel):
    family: str
    dim: int
    samples: int
    degenerate: str
    generic: str
    histogram: Dict[str, int]
    unexpected: int


class SweepReport(ReportModel):
    seed: int
    samples: int
    entries: List[SweepEntry]

    @property
    def ok(self) -> bool:
        return all(e.unexpected == 0 for e in self.entries)


class CheckResult(ReportModel):
    name: str
    passed: bool
    detail: str


class VerificationReport(ReportModel):
    seed: int
    samples: int
    passed: bool
    checks: List[CheckResult]
