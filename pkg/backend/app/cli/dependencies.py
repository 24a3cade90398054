"""
Input loading shared by the subcommands: the Lie algebra and the metric
named by a RunConfig.
"""

from typing import Optional

from app.core.exceptions import DimensionError
from app.models.lie_algebra import LieAlgebra
from app.models.metrics import GramMatrix
from app.schemas.config import RunConfig
from app.services.file_formats import read_gram_matrix, read_structure_constants
from app.services.lie_algebra_service import LieAlgebraService
from app.services.sampling_service import RandomMetrics


def get_algebra(config: RunConfig) -> LieAlgebra:
    if config.family is not None:
        return LieAlgebraService.build_family(config.family, config.dim)
    g = read_structure_constants(config.algebra_file)
    if config.dim is not None and config.dim != g.dim:
        raise DimensionError(f"--dim {config.dim} does not match the algebra file (n = {g.dim})")
    return g


def get_metric(config: RunConfig, n: int) -> Optional[GramMatrix]:
    """Metric from --metric or --random; None when neither is given."""
    if config.metric_file is not None:
        G = read_gram_matrix(config.metric_file)
    elif config.random_spec is not None:
        G = RandomMetrics.sample_metric(config.random_spec, n)
    else:
        return None
    if G.dim != n:
        raise DimensionError(f"metric of dimension {G.dim} for algebra of dimension {n}")
    return G
