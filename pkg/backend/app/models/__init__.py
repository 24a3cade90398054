"""
Immutable domain types: algebras, metrics, frames and curvature results.
"""

from .curvature import ConnectionTable, RicciReport, Signature
from .derivations import DerivationBasis
from .lie_algebra import BasisChange, FamilyTag, LieAlgebra
from .metrics import DoubleCosetReduction, GramMatrix, MilnorFrame, OrbitCertificate
from .solvsoliton import SolitonVerdict

__all__ = [
    'BasisChange',
    'ConnectionTable',
    'DerivationBasis',
    'DoubleCosetReduction',
    'FamilyTag',
    'GramMatrix',
    'LieAlgebra',
    'MilnorFrame',
    'OrbitCertificate',
    'RicciReport',
    'Signature',
    'SolitonVerdict',
]
