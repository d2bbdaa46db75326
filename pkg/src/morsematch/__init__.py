"""Discrete Morse theory on matching complexes of complete graphs."""

from .complex import (
    Matching,
    SimplicialComplex,
    VertexPair,
    build_matching_complex,
    cofacets,
    euler_characteristic,
    facets,
    format_cell,
    make_matching,
    parse_cell,
)
from .gvf import (
    GradientPath,
    GradientVectorField,
    add_pair,
    critical_cells,
    empty_field,
    enumerate_paths,
    is_acyclic,
    path_endpoints,
)
from .cancellation import (
    CancellationPlan,
    apply_plan,
    cancel_pair,
    check_simultaneous,
    find_cancellable_pairs,
)
from .homology import (
    HomologySummary,
    IntegerMatrix,
    homology_of,
    morse_boundary,
    morse_lower_bounds,
    simplicial_boundary,
    simplicial_homology,
    smith_normal_form,
)
from .optimizer import OptimalityCertificate, SearchConfig, initial_field, optimize, verify_certificate
from .fixtures import f_star_field, F_STAR_CELLS

__version__ = "0.1.0"

__all__ = [
    "Matching", "SimplicialComplex", "VertexPair", "build_matching_complex", "cofacets",
    "euler_characteristic", "facets", "format_cell", "make_matching", "parse_cell",
    "GradientPath", "GradientVectorField", "add_pair", "critical_cells", "empty_field",
    "enumerate_paths", "is_acyclic", "path_endpoints",
    "CancellationPlan", "apply_plan", "cancel_pair", "check_simultaneous", "find_cancellable_pairs",
    "HomologySummary", "IntegerMatrix", "homology_of", "morse_boundary", "morse_lower_bounds",
    "simplicial_boundary", "simplicial_homology", "smith_normal_form",
    "OptimalityCertificate", "SearchConfig", "initial_field", "optimize", "verify_certificate",
    "f_star_field", "F_STAR_CELLS",
]
