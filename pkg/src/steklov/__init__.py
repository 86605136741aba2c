"""Steklov spectra of weighted graphs with boundary.

Computes the Dirichlet-to-Neumann (Steklov) operator of a finite weighted
graph with boundary as a Schur complement of the weighted Laplacian, its
spectrum as a mass-weighted symmetric eigenproblem, lower bounds for the
first nonzero eigenvalue, and the exact structural characterization of the
graphs attaining equality (combs over a unique minimum-weight geodesic).
"""

from .bounds import (
    BoundReport,
    bound_extended,
    bound_general,
    bound_report,
    bound_unit_weight,
    boundary_quantities,
    has_boundary_edge,
)
from .corpus import (
    CorpusSpec,
    ViolationRecord,
    check_instance,
    count_exhaustive_instances,
    enumerate_small,
    random_graph,
    verify_corpus,
)
from .graph import (
    DisconnectedGraphError,
    EmptyBoundaryError,
    GeodesicLimitError,
    GraphError,
    WeightedBoundaryGraph,
    all_geodesics,
    bfs_distances,
    boundary_vector,
    graph_from_arrays,
    graph_to_json,
    graph_to_json_dict,
    hop_distance_matrix,
    is_connected,
    make_graph,
    parse_graph,
    vertex_vector,
)
from .rigidity import (
    CombDecomposition,
    PathWitness,
    RigidityReport,
    ToothSet,
    check_rigidity,
    comb_graph,
    is_comb_over,
    random_comb,
    report_json,
)
from .spectral import (
    EdgeDifferential,
    NumericsError,
    Spectrum,
    SteklovSystem,
    differential,
    dirichlet_energy,
    harmonic_extension,
    laplacian,
    normal_derivative,
    rayleigh_quotient,
    steklov_spectrum,
    steklov_system,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CombDecomposition",
    "CorpusSpec",
    "DisconnectedGraphError",
    "EdgeDifferential",
    "EmptyBoundaryError",
    "GeodesicLimitError",
    "GraphError",
    "NumericsError",
    "PathWitness",
    "RigidityReport",
    "Spectrum",
    "SteklovSystem",
    "ToothSet",
    "ViolationRecord",
    "WeightedBoundaryGraph",
    "all_geodesics",
    "bfs_distances",
    "bound_extended",
    "bound_general",
    "bound_report",
    "bound_unit_weight",
    "boundary_quantities",
    "boundary_vector",
    "check_instance",
    "check_rigidity",
    "comb_graph",
    "count_exhaustive_instances",
    "differential",
    "dirichlet_energy",
    "enumerate_small",
    "graph_from_arrays",
    "graph_to_json",
    "graph_to_json_dict",
    "harmonic_extension",
    "has_boundary_edge",
    "hop_distance_matrix",
    "is_comb_over",
    "is_connected",
    "laplacian",
    "make_graph",
    "normal_derivative",
    "parse_graph",
    "random_comb",
    "random_graph",
    "rayleigh_quotient",
    "report_json",
    "steklov_spectrum",
    "steklov_system",
    "verify_corpus",
    "vertex_vector",
]
