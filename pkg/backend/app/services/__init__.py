"""
Milnor Frames - Service Layer

This package contains the computations of the toolkit. Each module provides a
service class with static operations for one concern: structure constants,
derivations, frame reduction, curvature, solvsolitons, sampling and the
acceptance experiments.
"""

from .lie_algebra_service import LieAlgebraService
from .derivation_service import DerivationAlgebra
from .frame_reduction_service import FrameReduction
from .curvature_service import CurvatureCalculator
from .solvsoliton_service import SolitonClassifier
from .sampling_service import RandomMetrics
from .acceptance_service import AcceptanceSuite

__all__ = [
    'LieAlgebraService',
    'DerivationAlgebra',
    'FrameReduction',
    'CurvatureCalculator',
    'SolitonClassifier',
    'RandomMetrics',
    'AcceptanceSuite',
]
