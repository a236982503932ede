"""Uncovering random labeled trees: simulation, exact counts, limit laws and oracles."""
from tree_uncover.trees import (
    InvalidTreeError,
    LabeledTree,
    PrueferSeq,
    RngStream,
    RootedTree,
    prufer_decode,
    prufer_encode,
    sample_uniform_rooted_tree,
    sample_uniform_tree,
)
from tree_uncover.uncover import (
    ClusterReport,
    UncoverPath,
    cluster_report,
    interpolated_Z,
    martingale_Y,
    recursive_model_sampler,
    uncover_path,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterReport",
    "InvalidTreeError",
    "LabeledTree",
    "PrueferSeq",
    "RngStream",
    "RootedTree",
    "UncoverPath",
    "cluster_report",
    "interpolated_Z",
    "martingale_Y",
    "prufer_decode",
    "prufer_encode",
    "recursive_model_sampler",
    "sample_uniform_rooted_tree",
    "sample_uniform_tree",
    "uncover_path",
]
