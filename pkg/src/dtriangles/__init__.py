"""Packing and covering directed triangles in directed multigraphs."""
from .coverpack import (
    BranchTag,
    Certificate,
    ProofInvariantError,
    cover_and_pack,
    max_packing_capped,
    verify_certificate,
)
from .exact import ExactResult, exact_nu, exact_tau, naive_nu, naive_tau
from .flow import build_auxiliary_network, map_back, max_disjoint_paths
from .graph import (
    ArcSlot,
    DirectedMultigraph,
    GraphError,
    GraphParseError,
    Triangle,
    add_arc,
    delete_vertex,
    enumerate_triangles,
    parse_graph,
    remove_slots,
    serialize_graph,
    strip_loops_and_normalize,
    triangles_through,
)
from .search import (
    GeneratorSpec,
    SearchReport,
    all_tournaments,
    random_multigraph,
    random_tournament,
    ratio_scan,
    rotational_tournament,
)

__version__ = "0.1.0"
