"""
Test configuration and shared fixtures for the Milnor frame toolkit tests.
"""

import pytest

from app.models.lie_algebra import FamilyTag
from app.services.frame_reduction_service import FrameReduction
from app.services.lie_algebra_service import LieAlgebraService
from app.services.sampling_service import RandomMetrics

FAMILIES = [FamilyTag.RH2_SUM_ABELIAN, FamilyTag.RH_LINE_SUM]


@pytest.fixture
def rng():
    """Fresh PCG64 stream with a fixed seed for each test."""
    return RandomMetrics.generator(20240611)


@pytest.fixture
def sample_rh2_algebra():
    """[e1, e2] = e2 in dimension 4."""
    return LieAlgebraService.build_family(FamilyTag.RH2_SUM_ABELIAN, 4)


@pytest.fixture
def sample_rh_line_algebra():
    """[e1, ei] = ei, i = 3, 4, in dimension 4."""
    return LieAlgebraService.build_family(FamilyTag.RH_LINE_SUM, 4)


@pytest.fixture(params=[(f, n) for f in FAMILIES for n in (3, 4, 5, 6)],
                ids=lambda p: f"{p[0].value}-{p[1]}")
def sample_family_algebra(request):
    """Both families in dimensions 3 through 6."""
    family_tag, n = request.param
    return LieAlgebraService.build_family(family_tag, n)


@pytest.fixture
def sample_metric(rng):
    """Random 4x4 Gram matrix."""
    return RandomMetrics.draw_metric(rng, 4)


@pytest.fixture
def sample_orbit_metric(rng):
    """Factory for Gram matrices of (phi g_lam q).<,>_0."""

    def make(family_tag, n, lam):
        phi = FrameReduction.random_automorphism(family_tag, n, rng)
        q = RandomMetrics.random_orthogonal(n, rng)
        return FrameReduction.group_element_to_gram(phi @ LieAlgebraService.representative(n, lam) @ q)

    return make


@pytest.fixture
def sample_structure_file(tmp_path):
    """The Heisenberg algebra [e1, e2] = e3 on disk."""
    path = tmp_path / "heisenberg.txt"
    path.write_text("# Heisenberg\n3\n1 2 3 1.0\n")
    return path


@pytest.fixture
def sample_gram_file(tmp_path):
    path = tmp_path / "metric.txt"
    path.write_text("2 0 0\n0 1 0.5\n0 0.5 1\n")
    return path

