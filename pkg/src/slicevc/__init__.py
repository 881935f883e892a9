"""Slicewise VC-dimension tools: exact VC search, homogeneous partitions and audits."""

from .core import (
    BipartiteGraph,
    Density,
    EdgeColoredBipartiteGraph,
    GeneralThreeGraph,
    Graph,
    Power,
    TripartiteThreeGraph,
    VertexPart,
    as_rational,
    density_pair,
    density_triple,
    neighborhood,
    slice_graph,
    tripartitize,
)
from .partitions import Partition, common_refinement, is_equipartition, restrict
from .vc import find_uk_copy, slicewise_vc, vc_dimension

__version__ = "0.1.0"
