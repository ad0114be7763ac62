"""Combinatorics of weak-order graphs of spherical varieties."""

from .graph import (
    CertificationReport,
    EdgeType,
    OrbitEdge,
    OrbitGraph,
    OrbitVertex,
    delta_of,
    edge_status,
    infer_ranks,
    monoid_raise,
    validate_structure,
)
from .knop import build_action, certify_action, classify_generators, max_rank_orbit, prop_minimal_check, stabilizer
from .models import fixture, fixture_names, flag_case, group_case, is_isomorphic, parabolic_induction, sl2_atom
from .paths import (
    certify_paths,
    codim1_connected,
    constancy_check,
    enumerate_paths,
    is_multiplicity_free,
    is_neighbor,
    neighbor_connectivity,
    schubert_expansion,
    weyl_set,
)
from .serialize import export_dot, parse_graph_json, write_graph_json
from .weyl import CartanDatum, Weight, WeylElement, WeylGroup, build_weyl, parse_cartan

__version__ = "0.1.0"
