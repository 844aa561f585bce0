"""Polynomial off-diagonal decay on finite graphs: norms, covers, stability, inversion, powers."""

from .beurling_norms import BeurlingParams, beurling_norm, beurling_star_norm, decay_envelope, op_norm, schur_norm
from .errors import DecayError
from .graph_core import Graph, GraphMetrics, build_graph, gen_circulant, gen_lattice_box, gen_path, gen_random_connected, graph_metrics
from .matrices import GraphMatrix, a_gamma, identity, random_band, shift

__version__ = "0.1.0"

__all__ = [
    "BeurlingParams",
    "DecayError",
    "Graph",
    "GraphMatrix",
    "GraphMetrics",
    "a_gamma",
    "beurling_norm",
    "beurling_star_norm",
    "build_graph",
    "decay_envelope",
    "gen_circulant",
    "gen_lattice_box",
    "gen_path",
    "gen_random_connected",
    "graph_metrics",
    "identity",
    "op_norm",
    "random_band",
    "schur_norm",
    "shift",
]
