"""
Tests for Milnor frame reduction.
"""

import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import DefinitenessError, DimensionError, UnsupportedFamilyError
from app.models.lie_algebra import FamilyTag, LieAlgebra
from app.models.metrics import GramMatrix
from app.services.frame_reduction_service import FrameReduction
from app.services.lie_algebra_service import LieAlgebraService
from app.services.sampling_service import RandomMetrics

FAMILIES = [FamilyTag.RH2_SUM_ABELIAN, FamilyTag.RH_LINE_SUM]


def assert_frame_postconditions(g, G, frame, tol=1e-8):
    n = g.dim
    X = frame.frame
    np.testing.assert_allclose(frame.scale_k * X.T @ G.G @ X, np.eye(n), atol=tol)
    frame_alg = LieAlgebraService.change_basis(g, X)
    target = LieAlgebraService.milnor_algebra(g.family_tag, n, frame.lam)
    np.testing.assert_allclose(frame_alg.c, target.c, atol=tol * max(1.0, frame.lam))
    assert frame.lam >= 0
    assert frame.scale_k > 0
    assert frame.orthonormality_defect <= tol
    assert frame.bracket_defect <= tol


def test_gram_to_group_element_identity():
    np.testing.assert_array_equal(FrameReduction.gram_to_group_element(np.eye(3)), np.eye(3))


def test_gram_to_group_element_diagonal():
    g = FrameReduction.gram_to_group_element(np.diag([4.0, 1.0, 1.0]))
    np.testing.assert_allclose(g, np.diag([0.5, 1.0, 1.0]))


def test_gram_to_group_element_is_lower_triangular(sample_metric):
    g = FrameReduction.gram_to_group_element(sample_metric)
    np.testing.assert_allclose(np.triu(g, 1), 0.0, atol=0.0)
    assert np.all(np.diag(g) > 0)
    np.testing.assert_allclose(g.T @ sample_metric.G @ g, np.eye(4), atol=1e-8)


@settings(deadline=None, max_examples=40)
@given(
    diag=st.lists(st.floats(min_value=0.5, max_value=2.0), min_size=4, max_size=4),
    below=st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=6, max_size=6),
)
def test_group_element_round_trip_on_lower_triangular(diag, below):
    g = np.diag(diag)
    g[np.tril_indices(4, -1)] = below
    back = FrameReduction.gram_to_group_element(FrameReduction.group_element_to_gram(g))
    np.testing.assert_allclose(back, g, atol=1e-10 * max(1.0, np.max(np.abs(g))), rtol=1e-10)


def test_gram_to_group_element_rejects_indefinite():
    with pytest.raises(DefinitenessError):
        FrameReduction.gram_to_group_element(np.diag([1.0, -1.0, 1.0]))


def test_pushforward_metric(rng):
    phi = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    G = FrameReduction.pushforward_metric(np.eye(3), phi)
    np.testing.assert_allclose(phi.T @ G.G @ phi, np.eye(3), atol=1e-10)


@pytest.mark.parametrize("family_tag", FAMILIES)
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_reduce_canonical_metric(family_tag, n):
    g = LieAlgebraService.build_family(family_tag, n)
    frame = FrameReduction.reduce(g, GramMatrix.identity(n))
    assert frame.lam == 0.0
    assert frame.scale_k == pytest.approx(1.0)
    np.testing.assert_allclose(frame.frame, np.eye(n), atol=1e-12)
    assert not frame.conditioning_warning


def test_reduce_representative_metric():
    g = LieAlgebraService.build_family(FamilyTag.RH2_SUM_ABELIAN, 4)
    G = FrameReduction.group_element_to_gram(LieAlgebraService.representative(4, 2.0))
    frame = FrameReduction.reduce(g, G)
    assert frame.lam == pytest.approx(2.0, abs=1e-12)
    assert frame.scale_k == pytest.approx(1.0)
    assert_frame_postconditions(g, G, frame)


@pytest.mark.parametrize("family_tag", FAMILIES)
@pytest.mark.parametrize("n", [3, 4, 6])
def test_reduce_recovers_lambda_from_orbit(family_tag, n, sample_orbit_metric):
    g = LieAlgebraService.build_family(family_tag, n)
    G = sample_orbit_metric(family_tag, n, 0.5)
    frame = FrameReduction.reduce(g, G)
    assert frame.lam == pytest.approx(0.5, abs=1e-9)
    assert_frame_postconditions(g, G, frame)


def test_reduce_random_metrics(sample_family_algebra, rng):
    n = sample_family_algebra.dim
    for _ in range(20):
        G = RandomMetrics.draw_metric(rng, n)
        frame = FrameReduction.reduce(sample_family_algebra, G)
        assert_frame_postconditions(sample_family_algebra, G, frame)
        assert FrameReduction.validate_aut_element(sample_family_algebra, frame.automorphism)
        assert frame.automorphism[0, 0] == pytest.approx(1.0)


def test_reduce_is_deterministic(sample_rh_line_algebra, sample_metric):
    a = FrameReduction.reduce(sample_rh_line_algebra, sample_metric)
    b = FrameReduction.reduce(sample_rh_line_algebra, GramMatrix(sample_metric.G.copy()))
    assert a.lam == b.lam
    np.testing.assert_array_equal(a.frame, b.frame)


def test_lambda_invariant_under_scaling_and_automorphisms(sample_family_algebra, rng):
    n = sample_family_algebra.dim
    for _ in range(10):
        G = RandomMetrics.draw_metric(rng, n)
        lam = FrameReduction.reduce(sample_family_algebra, G).lam
        c = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        assert FrameReduction.reduce(sample_family_algebra, G.scaled(c)).lam == pytest.approx(lam, rel=1e-8, abs=1e-8)
        phi = FrameReduction.random_automorphism(sample_family_algebra.family_tag, n, rng)
        pushed = FrameReduction.pushforward_metric(G, phi)
        assert FrameReduction.reduce(sample_family_algebra, pushed).lam == pytest.approx(lam, rel=1e-8, abs=1e-8)


def test_reduce_group_element_factorization(sample_family_algebra, rng):
    n = sample_family_algebra.dim
    g = rng.standard_normal((n, n)) + n * np.eye(n)
    red = FrameReduction.reduce_group_element(sample_family_algebra, g)
    np.testing.assert_allclose(
        red.phi @ g @ red.orthogonal, LieAlgebraService.representative(n, red.raw_lambda), atol=1e-10
    )
    np.testing.assert_allclose(red.orthogonal.T @ red.orthogonal, np.eye(n), atol=1e-12)
    assert FrameReduction.validate_aut_element(sample_family_algebra, red.phi)


def test_small_lambda_is_snapped():
    g = LieAlgebraService.build_family(FamilyTag.RH2_SUM_ABELIAN, 3)
    G = FrameReduction.group_element_to_gram(LieAlgebraService.representative(3, 1e-11))
    frame = FrameReduction.reduce(g, G)
    assert frame.lam == 0.0
    assert frame.raw_lambda == pytest.approx(1e-11, rel=1e-3)


def test_reduce_rejects_custom_algebra():
    g = LieAlgebra(dim=3, c=np.zeros((3, 3, 3)))
    with pytest.raises(UnsupportedFamilyError):
        FrameReduction.reduce(g, np.eye(3))


def test_reduce_dimension_mismatch(sample_rh2_algebra):
    with pytest.raises(DimensionError):
        FrameReduction.reduce(sample_rh2_algebra, np.eye(3))


def test_reduce_rejects_non_spd(sample_rh2_algebra):
    with pytest.raises(DefinitenessError):
        FrameReduction.reduce(sample_rh2_algebra, -np.eye(4))


def test_ill_conditioned_metric_gets_warning(sample_rh2_algebra, caplog):
    G = np.diag([1.0, 1e-7, 1e7, 1.0])
    with caplog.at_level(logging.WARNING, logger="app"):
        frame = FrameReduction.reduce(sample_rh2_algebra, G)
    assert frame.conditioning_warning
    assert frame.condition_number > 1e12
    assert frame.residuals["conditioning_warning"] is True
    assert "ill-conditioned" in caplog.text


def test_residuals_report_warning_as_bool(sample_rh2_algebra):
    residuals = FrameReduction.reduce(sample_rh2_algebra, np.eye(4)).residuals
    assert residuals["conditioning_warning"] is False
    assert residuals["orthonormality_defect"] <= 1e-12


@pytest.mark.parametrize("family_tag", FAMILIES)
@pytest.mark.parametrize("n", [6, 8])
def test_reduce_wide_diagonal_spectrum(family_tag, n):
    """cond(G) = 1e9 is below the warning threshold, so the frame must pass its checks."""
    g = LieAlgebraService.build_family(family_tag, n)
    G = GramMatrix(np.diag(np.logspace(0, 9, n)))
    frame = FrameReduction.reduce(g, G)
    assert frame.lam == 0.0
    assert not frame.conditioning_warning
    assert frame.orthonormality_defect <= 1e-8
    assert frame.bracket_defect <= 1e-8


@pytest.mark.parametrize("family_tag", FAMILIES)
@pytest.mark.parametrize("n", [5, 6])
def test_reduce_near_singular_metric_returns_warned_frame(family_tag, n, rng):
    g = LieAlgebraService.build_family(family_tag, n)
    for _ in range(5):
        Q = RandomMetrics.random_orthogonal(n, rng)
        G = Q @ np.diag(np.logspace(0, 13.5, n)) @ Q.T
        frame = FrameReduction.reduce(g, 0.5 * (G + G.T))
        assert frame.conditioning_warning
        assert frame.lam >= 0
        assert frame.scale_k > 0


def test_orbit_parameter_equal_examples(sample_rh2_algebra, sample_metric, rng):
    assert FrameReduction.orbit_parameter_equal(sample_rh2_algebra, sample_metric, sample_metric.scaled(3.7))
    G1 = FrameReduction.group_element_to_gram(LieAlgebraService.representative(4, 1.0))
    assert not FrameReduction.orbit_parameter_equal(sample_rh2_algebra, np.eye(4), G1, tol=1e-6)
    phi = FrameReduction.random_automorphism(FamilyTag.RH2_SUM_ABELIAN, 4, rng)
    pushed = FrameReduction.pushforward_metric(sample_metric, phi)
    assert FrameReduction.orbit_parameter_equal(sample_rh2_algebra, sample_metric, pushed)


def test_orbit_certificate(sample_rh_line_algebra, sample_metric, rng):
    phi = FrameReduction.random_automorphism(FamilyTag.RH_LINE_SUM, 4, rng)
    pushed = FrameReduction.pushforward_metric(sample_metric, phi)
    cert = FrameReduction.orbit_certificate(sample_rh_line_algebra, sample_metric, pushed)
    assert cert is not None
    assert cert.scalar > 0
    assert cert.defect < 1e-8
    assert FrameReduction.validate_aut_element(sample_rh_line_algebra, cert.automorphism)


def test_orbit_certificate_none_for_different_parameters(sample_rh2_algebra):
    G1 = FrameReduction.group_element_to_gram(LieAlgebraService.representative(4, 1.0))
    assert FrameReduction.orbit_certificate(sample_rh2_algebra, np.eye(4), G1) is None


def test_validate_aut_element_examples(sample_rh2_algebra):
    assert FrameReduction.validate_aut_element(sample_rh2_algebra, np.eye(4))
    assert FrameReduction.validate_aut_element(sample_rh2_algebra, 2 * np.eye(4))
    M = np.eye(4)
    M[0, 1] = 1.0
    assert not FrameReduction.validate_aut_element(sample_rh2_algebra, M)


def test_validate_aut_element_rejects_singular_pattern(sample_rh2_algebra):
    M = np.eye(4)
    M[1, 1] = 0.0
    assert not FrameReduction.validate_aut_element(sample_rh2_algebra, M)


def test_validate_aut_element_custom_algebra():
    so3 = LieAlgebraService.from_brackets(3, {(0, 1): {2: 1.0}, (1, 2): {0: 1.0}, (0, 2): {1: -1.0}})
    theta = 0.3
    R = np.array([[np.cos(theta), -np.sin(theta), 0.0], [np.sin(theta), np.cos(theta), 0.0], [0.0, 0.0, 1.0]])
    assert FrameReduction.validate_aut_element(so3, R)
    assert not FrameReduction.validate_aut_element(so3, 2 * np.eye(3))


@pytest.mark.parametrize("family_tag", FAMILIES)
def test_random_automorphism_pattern(family_tag, rng):
    g = LieAlgebraService.build_family(family_tag, 5)
    for scalar in (True, False):
        phi = FrameReduction.random_automorphism(family_tag, 5, rng, scalar=scalar)
        assert FrameReduction.validate_aut_element(g, phi)
        assert phi[0, 0] > 0 and phi[1, 1] > 0
        assert np.linalg.det(phi[2:, 2:]) > 0
        if not scalar:
            assert phi[0, 0] == 1.0
