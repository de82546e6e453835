"""Rainbow-Fano-free colorings of 3-uniform hypergraphs, at desk scale.

Constructions (K_n, B_n, complete multipartite), Fano copy enumeration,
exact and sampled counts of pattern-free colorings, exact ex(n, Fano) for
small n, stability and regularity diagnostics, and certified evaluation of
the related constants.
"""

from .coloring import (
    RAINBOW,
    Coloring,
    Pattern,
    count_pattern_free_exact,
    estimate_pattern_free,
    is_pattern_free,
    rainbow_free_single_fano_closed_form,
)
from .errors import BudgetExhausted, InputError, InternalConsistencyError
from .extremal import benchmark_against_theorem, turan_number
from .fano import (
    FANO_LINES,
    enumerate_fano_copies,
    fano_automorphisms,
    fano_copies_through_edge,
    is_fano_free,
)
from .hypergraph import (
    Bipartition,
    Hypergraph3,
    LinkGraph,
    MultipartiteSpec,
    bad_edges,
    build_bn,
    build_complete,
    build_multipartite,
    link_graph,
    min_degree,
    split_crossing,
)

__version__ = "0.1.0"

__all__ = [
    "RAINBOW", "Coloring", "Pattern", "count_pattern_free_exact", "estimate_pattern_free",
    "is_pattern_free", "rainbow_free_single_fano_closed_form", "BudgetExhausted", "InputError",
    "InternalConsistencyError", "benchmark_against_theorem", "turan_number", "FANO_LINES",
    "enumerate_fano_copies", "fano_automorphisms", "fano_copies_through_edge", "is_fano_free",
    "Bipartition", "Hypergraph3", "LinkGraph", "MultipartiteSpec", "bad_edges", "build_bn",
    "build_complete", "build_multipartite", "link_graph", "min_degree", "split_crossing",
]
