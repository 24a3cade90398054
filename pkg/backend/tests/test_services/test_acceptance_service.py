"""
Tests for the signature sweep and the verification run.
"""

import pytest

from app.models.lie_algebra import FamilyTag
from app.schemas.reports import SweepReport, VerificationReport
from app.services.acceptance_service import AcceptanceSuite


def test_signature_sweep_counts():
    report = AcceptanceSuite.signature_sweep(seed=3, samples=12, dims=(3, 4))
    assert len(report.entries) == 4
    for entry in report.entries:
        assert sum(entry.histogram.values()) == 12
        assert entry.unexpected == 0
        assert set(entry.histogram) <= {entry.degenerate, entry.generic}
    assert report.ok


def test_signature_sweep_random_metrics_are_generic():
    report = AcceptanceSuite.signature_sweep(seed=0, samples=8, families=[FamilyTag.RH_LINE_SUM], dims=(5,))
    (entry,) = report.entries
    assert entry.generic == "(4,0,1)"
    assert entry.histogram == {"(4,0,1)": 8}


def test_sweep_does_not_depend_on_workers():
    serial = AcceptanceSuite.signature_sweep(seed=11, samples=6, dims=(3,), workers=1)
    threaded = AcceptanceSuite.signature_sweep(seed=11, samples=6, dims=(3,), workers=3)
    assert serial.to_json() == threaded.to_json()


def test_sweep_report_json_round_trip():
    report = AcceptanceSuite.signature_sweep(seed=1, samples=4, dims=(3,))
    assert SweepReport.model_validate_json(report.to_json()).to_json() == report.to_json()


@pytest.mark.parametrize(
    "check",
    [
        AcceptanceSuite.check_closed_form,
        AcceptanceSuite.check_connection_tables,
        AcceptanceSuite.check_block_polynomial,
        AcceptanceSuite.check_derivations,
    ],
)
def test_deterministic_checks_pass(check):
    result = check()
    assert result.passed, result.detail


def test_sampled_checks_pass():
    assert AcceptanceSuite.check_reduction(seed=5, per_dim=3, workers=1).passed
    assert AcceptanceSuite.check_signatures(seed=5, per_dim=3, workers=2).passed
    soliton, einstein = AcceptanceSuite.check_solitons(seed=5, per_dim=3, workers=1)
    assert soliton.passed, soliton.detail
    assert einstein.passed, einstein.detail


def test_verify_small_run():
    report = AcceptanceSuite.verify(seed=0, samples=8, workers=2)
    assert report.passed, [c.detail for c in report.checks if not c.passed]
    assert len(report.checks) == 8
    assert VerificationReport.model_validate_json(report.to_json()) == report


@pytest.mark.slow
def test_verify_full_run():
    report = AcceptanceSuite.verify(seed=0, samples=1000, workers=4)
    assert report.passed, [c.detail for c in report.checks if not c.passed]
