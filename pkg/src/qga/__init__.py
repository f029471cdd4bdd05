"""Cluster quiver mutation classes, graph genus and surface constructions."""

__version__ = "0.1.0"

from .canonical import (
    CanonicalKey,
    canonical_graph_key,
    canonical_quiver,
    canonical_quiver_key,
    is_isomorphic,
)
from .genus import GenusResult, RotationSystem, embedding_genus, genus_lower_bound, is_planar, min_genus, trace_faces
from .mutation_class import ClassReport, ExplorationLimits, are_mutation_equivalent, enumerate_class, genus_distribution
from .quiver import (
    ExchangeMatrix,
    Quiver,
    QuiverError,
    SimpleGraph,
    matrix_from_quiver,
    matrix_mutate,
    quiver_from_matrix,
    quiver_mutate,
    underlying_graph,
    validate,
)
from .surface import SurfaceSignature, Triangulation, arc_count, flip, pi, signed_adjacency, validate_triangulation
from .blocks import Block, OutletMatching, construct_rn, construct_tn, glue, torus_planar_quiver
from .catalog import NamedQuiver, figure5, named

__all__ = [
    "Block", "CanonicalKey", "ClassReport", "ExchangeMatrix", "ExplorationLimits", "GenusResult",
    "NamedQuiver", "OutletMatching", "Quiver", "QuiverError", "RotationSystem", "SimpleGraph",
    "SurfaceSignature", "Triangulation", "arc_count", "are_mutation_equivalent", "canonical_graph_key",
    "canonical_quiver", "canonical_quiver_key", "construct_rn", "construct_tn", "embedding_genus",
    "enumerate_class", "figure5", "flip", "genus_distribution", "genus_lower_bound", "glue", "is_isomorphic",
    "is_planar", "matrix_from_quiver", "matrix_mutate", "min_genus", "named", "pi", "quiver_from_matrix",
    "quiver_mutate", "signed_adjacency", "torus_planar_quiver", "trace_faces", "underlying_graph", "validate",
    "validate_triangulation",
]
