# app/models/solvsoliton.py
from dataclasses import dataclass

import numpy as np

from .base import DomainModel


@dataclass(frozen=True, eq=False)
class SolitonVerdict(DomainModel):
    """
    Outcome of fitting Ric = c I + D with D in Der(g).

    `residual` is the Frobenius norm of Ric - c I - D at the least-squares
    optimum; `einstein_residual` is that of Ric - (tr Ric / n) I.
    """

    is_solvsoliton: bool
    c: float
    derivation_coeffs: np.ndarray
    derivation: np.ndarray
    residual: float
    is_einstein: bool
    einstein_constant: float
    einstein_residual: float
    ric_norm: float

    ARRAY_FIELDS = {"derivation_coeffs": 1, "derivation": 2}
