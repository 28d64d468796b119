"""Graphs as planar and spatial linkages."""
from .graph import (Graph, cgk_estimate, edge_key, edge_lengths, graph_square,
                    max_length_residual)
from .laman import LamanResult, laman_bruteforce, laman_check
from .nac import (Coloring, FlexibleLabeling, flexible_labeling_exists, nac_check,
                  nac_check_cycles, nac_enumerate, nac_motion)
from .homogeneous import (HomogeneousConfigPoint, boundary_coloring, homogeneous_residual,
                          nac_limit_point)
from .frameworks import (Dixon2Config, DixonData, RigidityMatrixResult, SymmetricEmbedding,
                         dixon1_data, dixon1_motion, dixon2_config, generic_placement,
                         rigidity_matrix, symmetric_count_plane, symmetric_embedding_line,
                         symmetric_embedding_plane)
from . import catalog

__all__ = [
    "Graph", "cgk_estimate", "edge_key", "edge_lengths", "graph_square", "max_length_residual",
    "LamanResult", "laman_bruteforce", "laman_check",
    "Coloring", "FlexibleLabeling", "flexible_labeling_exists", "nac_check", "nac_check_cycles",
    "nac_enumerate", "nac_motion",
    "HomogeneousConfigPoint", "boundary_coloring", "homogeneous_residual", "nac_limit_point",
    "Dixon2Config", "DixonData", "RigidityMatrixResult", "SymmetricEmbedding", "dixon1_data",
    "dixon1_motion", "dixon2_config", "generic_placement", "rigidity_matrix",
    "symmetric_count_plane", "symmetric_embedding_line", "symmetric_embedding_plane", "catalog",
]
