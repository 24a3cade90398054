"""
Run configuration schemas.

RunConfig is the validated form of a command-line invocation; the CLI builds
one from its options and hands it to app.cli.runner.run.
"""

from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from app.core.settings import settings
from app.models.lie_algebra import FamilyTag


class Subcommand(str, Enum):
    REDUCE = "reduce"
    CURVATURE = "curvature"
    DERIVATIONS = "derivations"
    SOLVSOLITON = "solvsoliton"
    SIGNATURE_SWEEP = "signature-sweep"
    VERIFY_PAPER = "verify-paper"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class RandomMetricSpec(BaseModel):
    seed: int = Field(..., ge=0)
    cond_cap: float = Field(default_factory=lambda: settings.RANDOM_METRIC_COND_CAP, gt=1)


class RunConfig(BaseModel):
    subcommand: Subcommand
    family: Optional[FamilyTag] = None
    dim: Optional[int] = None
    algebra_file: Optional[Path] = None
    metric_file: Optional[Path] = None
    seed: Optional[int] = Field(default=None, ge=0)
    lam: Optional[float] = Field(default=None, ge=0)
    tol: float = Field(default_factory=lambda: settings.MILNOR_TOL, gt=0)
    output: OutputFormat = OutputFormat.TEXT
    samples: int = Field(default=1000, ge=1)
    workers: int = Field(default=1, ge=1)
    families: List[FamilyTag] = Field(
        default_factory=lambda: [FamilyTag.RH2_SUM_ABELIAN, FamilyTag.RH_LINE_SUM]
    )
    dims: List[int] = Field(default_factory=lambda: list(range(3, 7)))

    @model_validator(mode="after")
    def check_sources(self) -> "RunConfig":
        cmd = self.subcommand
        if cmd in (Subcommand.SIGNATURE_SWEEP, Subcommand.VERIFY_PAPER):
            if any(n < 3 for n in self.dims):
                raise ValueError("sweep dimensions must be >= 3")
            if any(not f.is_family for f in self.families):
                raise ValueError("sweeps run over the rh2+abelian and rh-line families only")
            return self

        if self.family is None and self.algebra_file is None:
            raise ValueError("one of --family or --algebra is required")
        if self.family is not None and self.algebra_file is not None:
            raise ValueError("--family and --algebra are mutually exclusive")
        if self.family is not None:
            if not self.family.is_family:
                raise ValueError("--family must be rh2+abelian or rh-line")
            if self.dim is None:
                raise ValueError("--dim is required with --family")
        elif cmd in (Subcommand.REDUCE, Subcommand.SOLVSOLITON):
            raise ValueError(f"{cmd.value} is only defined for the two families")

        sources = [s for s in (self.metric_file, self.seed, self.lam) if s is not None]
        if cmd in (Subcommand.REDUCE, Subcommand.SOLVSOLITON):
            if self.lam is not None or len(sources) != 1:
                raise ValueError("exactly one of --metric or --random is required")
        elif cmd is Subcommand.CURVATURE:
            if len(sources) > 1:
                raise ValueError("--metric, --random and --lambda are mutually exclusive")
            if self.lam is not None and self.family is None:
                raise ValueError("--lambda needs --family")
        elif cmd is Subcommand.DERIVATIONS:
            if self.metric_file is not None or self.seed is not None:
                raise ValueError("derivations takes no metric")
            if self.lam is not None and self.family is None:
                raise ValueError("--lambda needs --family")
        return self

    @property
    def random_spec(self) -> Optional[RandomMetricSpec]:
        return None if self.seed is None else RandomMetricSpec(seed=self.seed)
