"""
Tests for run configuration validation and subcommand dispatch.
"""

import logging

import pytest
from pydantic import ValidationError

from app.cli.runner import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, run
from app.core.exceptions import NumericalError
from app.models.lie_algebra import FamilyTag
from app.schemas.config import RunConfig, Subcommand
from app.schemas.reports import CurvatureReport, FrameReport, SweepReport
from app.services.frame_reduction_service import FrameReduction


def test_run_reduce():
    config = RunConfig(subcommand=Subcommand.REDUCE, family=FamilyTag.RH2_SUM_ABELIAN, dim=4, seed=42)
    result = run(config)
    assert result.exit_code == EXIT_OK
    assert isinstance(result.report, FrameReport)
    assert result.report.lam >= 0
    assert result.report.k > 0
    assert result.report.residuals.orthonormality_defect < 1e-8


def test_run_curvature_with_lambda():
    config = RunConfig(subcommand=Subcommand.CURVATURE, family=FamilyTag.RH_LINE_SUM, dim=3, lam=0.0)
    report = run(config).report
    assert isinstance(report, CurvatureReport)
    assert report.eigenvalues == pytest.approx([-1.0, -1.0, 0.0])
    assert report.k == 1.0


def test_run_curvature_defaults_to_canonical_metric():
    config = RunConfig(subcommand=Subcommand.CURVATURE, family=FamilyTag.RH2_SUM_ABELIAN, dim=4)
    report = run(config).report
    assert report.lam == 0.0
    assert report.signature.as_tuple() == (2, 2, 0)


def test_run_maps_input_errors_to_exit_one(tmp_path):
    config = RunConfig(
        subcommand=Subcommand.REDUCE,
        family=FamilyTag.RH_LINE_SUM,
        dim=3,
        metric_file=tmp_path / "missing.txt",
    )
    result = run(config)
    assert result.exit_code == EXIT_INVALID
    assert result.report is None
    assert result.error


def test_run_maps_numerical_errors_to_exit_two(monkeypatch):
    def fail(*args, **kwargs):
        raise NumericalError("reduction failed its checks")

    monkeypatch.setattr(FrameReduction, "reduce", fail)
    config = RunConfig(subcommand=Subcommand.REDUCE, family=FamilyTag.RH_LINE_SUM, dim=3, seed=1)
    result = run(config)
    assert result.exit_code == EXIT_NUMERICAL
    assert "failed its checks" in result.error


def test_run_curvature_keeps_ricci_when_reduction_fails(monkeypatch, caplog):
    def fail(*args, **kwargs):
        raise NumericalError("reduction failed its checks")

    monkeypatch.setattr(FrameReduction, "reduce", fail)
    config = RunConfig(subcommand=Subcommand.CURVATURE, family=FamilyTag.RH2_SUM_ABELIAN, dim=4, seed=3)
    with caplog.at_level(logging.WARNING, logger="app"):
        result = run(config)
    assert result.exit_code == EXIT_OK
    assert result.report.lam is None
    assert result.report.k is None
    assert result.report.signature.as_tuple() == (2, 1, 1)
    assert "without lambda" in caplog.text


def test_run_sweep():
    config = RunConfig(subcommand=Subcommand.SIGNATURE_SWEEP, samples=4, dims=[3], seed=0)
    result = run(config)
    assert result.exit_code == EXIT_OK
    assert isinstance(result.report, SweepReport)
    assert [e.family for e in result.report.entries] == ["rh2+abelian", "rh-line"]


@pytest.mark.parametrize(
    "fields",
    [
        {"subcommand": "reduce", "family": "rh2+abelian"},
        {"subcommand": "reduce", "family": "rh2+abelian", "dim": 4, "seed": 1, "lam": 1.0},
        {"subcommand": "reduce", "family": "rh2+abelian", "dim": 4, "seed": -1},
        {"subcommand": "curvature", "family": "rh-line", "dim": 3, "tol": 0.0},
        {"subcommand": "curvature", "algebra_file": "a.txt", "lam": 1.0},
        {"subcommand": "derivations", "family": "rh-line", "dim": 3, "seed": 4},
        {"subcommand": "solvsoliton", "algebra_file": "a.txt", "seed": 4},
        {"subcommand": "signature-sweep", "families": ["custom"]},
        {"subcommand": "verify-paper", "workers": 0},
        {"subcommand": "fit"},
    ],
)
def test_run_config_rejects(fields):
    with pytest.raises(ValidationError):
        RunConfig(**fields)


def test_run_config_defaults():
    config = RunConfig(subcommand="verify-paper")
    assert config.samples == 1000
    assert config.dims == [3, 4, 5, 6]
    assert config.random_spec is None
    assert RunConfig(subcommand="reduce", family="rh-line", dim=3, seed=5).random_spec.seed == 5
