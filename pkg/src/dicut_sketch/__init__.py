"""Sublinear-space streaming estimation of the Max-DICUT value.

Core pieces: exact multigraph statistics and oracles (`multigraph`),
bias/degree partitions (`partition`), snapshot matrices and refined
snapshot arrays (`snapshot`), window smoothing and sandwich bounds
(`smoothing`), oblivious rounding algorithms (`oblivious`), k-wise
independent hashing (`hashfam`), the mergeable streaming sketch
(`sketcher`), and a batch verification harness (`harness`).
"""

from .multigraph import (
    Multigraph,
    VertexStats,
    blowup_graph,
    blowup_labels,
    cut_value,
    max_dicut_bruteforce,
    sparsify,
    vertex_stats,
)
from .oblivious import ObliviousAlg, default_alg, evaluate, oblivious_sample, refine_alg
from .partition import ThresholdVector, bias_thresholds, degree_thresholds, index_of, is_lambda_wide, refine_partition
from .sketcher import (
    EstimateReport,
    FullSketch,
    LayerSketch,
    ParamSet,
    combine,
    derive_params,
    finalize,
    full_sampling_params,
    run_stream,
    sketch_edge,
    sketch_stream,
    space_report,
)
from .snapshot import compute_refined_snapshot, compute_snapshot, project

__version__ = "0.1.0"
