"""Pull-only graph processing with an edge-group wedge frontier.

The engine iterates over destination-grouped edge vectors; the traditional
source-oriented vertex frontier it produces is converted, when sparse
enough, into a destination-ordered bitmask over edge-vector groups that the
pull engine can consume directly. A push-based reference engine serves as
the correctness oracle.
"""

from .apps import bfs_program, cc_program, make_program, sssp_program
from .engine import (
    UNREACHED,
    ApplicationProgram,
    EngineConfig,
    IterationStats,
    MinPlusKernel,
    PushIterationStats,
    RunResult,
    ValueBuffers,
    result_digest,
    run_iteration_full,
    run_iteration_wedge,
    run_until_convergence,
    stats_signature,
)
from .frontier import (
    FrontierPrecision,
    FullnessThreshold,
    VertexFrontier,
    WedgeFrontier,
    should_transform,
    transform_frontier,
    wedge_covered_vectors,
)
from .graph import (
    EdgeIndex,
    EdgeList,
    PullTopology,
    PushTopology,
    build_edge_index,
    build_pull_topology,
    build_push_topology,
    compute_out_degrees,
)
from .graph_io import (
    GenSpec,
    ParseError,
    generate,
    parse_edge_list,
    serialize_edge_list,
    symmetrize,
    synthesize_weights,
)
from .kernels import available_backends, get_backend
from .push_ref import run_iteration_push, run_until_convergence_push

__version__ = "0.1.0"

__all__ = [
    "ApplicationProgram",
    "EdgeIndex",
    "EdgeList",
    "EngineConfig",
    "FrontierPrecision",
    "FullnessThreshold",
    "GenSpec",
    "IterationStats",
    "MinPlusKernel",
    "ParseError",
    "PullTopology",
    "PushIterationStats",
    "PushTopology",
    "RunResult",
    "UNREACHED",
    "ValueBuffers",
    "VertexFrontier",
    "WedgeFrontier",
    "available_backends",
    "bfs_program",
    "build_edge_index",
    "build_pull_topology",
    "build_push_topology",
    "cc_program",
    "compute_out_degrees",
    "generate",
    "get_backend",
    "make_program",
    "parse_edge_list",
    "result_digest",
    "run_iteration_full",
    "run_iteration_push",
    "run_iteration_wedge",
    "run_until_convergence",
    "run_until_convergence_push",
    "serialize_edge_list",
    "should_transform",
    "sssp_program",
    "stats_signature",
    "symmetrize",
    "synthesize_weights",
    "transform_frontier",
    "wedge_covered_vectors",
]
